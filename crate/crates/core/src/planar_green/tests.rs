use super::*;
use crate::elliptic::{lattice_constants, theta1};
use crate::numkit::{area_quadrature, laplacian_at, Region};
use rand::{Rng, SeedableRng};

fn disk1() -> DomainDescriptor {
    DomainDescriptor::Disk { r: 1.0 }
}

fn rng() -> rand::rngs::StdRng {
    rand::rngs::StdRng::seed_from_u64(0x5eed)
}

fn random_in(domain: &DomainDescriptor, r: &mut rand::rngs::StdRng) -> Complex64 {
    match *domain {
        DomainDescriptor::Disk { r: rad } => {
            Complex64::from_polar(rad * r.gen::<f64>().sqrt() * 0.95, r.gen::<f64>() * 2.0 * PI)
        }
        DomainDescriptor::HalfPlane => c(r.gen_range(-3.0..3.0), r.gen_range(0.05..3.0)),
        DomainDescriptor::SlitPlane => loop {
            let z = c(r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0));
            if domain.boundary_distance(z) > 0.02 {
                break z;
            }
        },
        _ => unreachable!(),
    }
}

#[test]
fn disk_green_value() {
    let g = green(&disk1(), c(0.5, 0.0), c(0.0, 0.0)).unwrap();
    assert!((g - 2f64.ln() / (2.0 * PI)).abs() < 1e-15);
    assert!((g - 0.1103178).abs() < 1e-7);
}

#[test]
fn green_vanishes_on_boundary_and_is_positive_inside() {
    let mut r = rng();
    let kinds = [disk1(), DomainDescriptor::Disk { r: 2.5 }, DomainDescriptor::HalfPlane, DomainDescriptor::SlitPlane];
    for d in &kinds {
        let a = random_in(d, &mut r);
        for k in 0..200 {
            let t = k as f64 / 200.0;
            let zb = match *d {
                DomainDescriptor::Disk { r } => Complex64::from_polar(r, 2.0 * PI * t),
                DomainDescriptor::HalfPlane => c((PI * (t - 0.5)).tan(), 0.0),
                DomainDescriptor::SlitPlane => c(10.0 * t, 0.0),
                _ => unreachable!(),
            };
            assert!(green(d, zb, a).unwrap().abs() < 1e-9, "{d:?} at {zb}");
            let z = random_in(d, &mut r);
            if (z - a).norm() > 1e-6 {
                assert!(green(d, z, a).unwrap() > 0.0);
            }
        }
    }
}

#[test]
fn green_is_symmetric() {
    let (z, a) = (c(0.3, 0.1), c(0.5, 0.0));
    assert!((green(&disk1(), z, a).unwrap() - green(&disk1(), a, z).unwrap()).abs() < 1e-15);
    let mut r = rng();
    for d in [DomainDescriptor::HalfPlane, DomainDescriptor::SlitPlane] {
        for _ in 0..20 {
            let (z, a) = (random_in(&d, &mut r), random_in(&d, &mut r));
            assert!((green(&d, z, a).unwrap() - green(&d, a, z).unwrap()).abs() < 1e-12);
        }
    }
}

#[test]
fn green_errors() {
    assert!(matches!(green(&disk1(), c(0.2, 0.0), c(0.2, 0.0)), Err(Error::Pole { .. })));
    assert!(matches!(green(&disk1(), c(1.2, 0.0), c(0.2, 0.0)), Err(Error::Domain { .. })));
    assert!(matches!(robin_data(&disk1(), c(1.0 - 1e-12, 0.0)), Err(Error::Conditioning(_))));
}

#[test]
fn unit_flux_normalization() {
    // ∮ −∂G/∂n ds = 1 with ∂G/∂n = 2 Re(∂G/∂z · n)
    let d = DomainDescriptor::Disk { r: 1.7 };
    let a = c(0.4, -0.9);
    let n = 256;
    let mut flux = 0.0;
    for j in 0..n {
        let nrm = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64);
        let g = green_dz(&d, 1.7 * nrm, a).unwrap();
        flux -= 2.0 * (g * nrm).re * (2.0 * PI * 1.7 / n as f64);
    }
    assert!((flux - 1.0).abs() < 1e-12);
}

#[test]
fn robin_examples() {
    let e = robin_data(&disk1(), c(0.0, 0.0)).unwrap();
    assert_eq!((e.h0, e.h1), (0.0, c(0.0, 0.0)));
    let e = robin_data(&disk1(), c(0.5, 0.0)).unwrap();
    assert!((e.h0 - 0.75f64.ln()).abs() < 1e-15 && (e.h0 + 0.287682).abs() < 1e-6);
    assert!((e.h1 - c(-2.0 / 3.0, 0.0)).norm() < 1e-15);
    let e = robin_data(&DomainDescriptor::HalfPlane, I).unwrap();
    assert!((e.h0 - 2f64.ln()).abs() < 1e-15);
    assert!((e.h1 - c(0.0, -0.5)).norm() < 1e-15);
}

#[test]
fn robin_agrees_with_limit_of_green() {
    // H(a,a) = lim 2πG(z,a) + log|z−a|
    let mut r = rng();
    for d in [disk1(), DomainDescriptor::HalfPlane, DomainDescriptor::SlitPlane] {
        let a = random_in(&d, &mut r);
        let eps = 1e-7;
        let z = a + Complex64::from_polar(eps, 0.3);
        let lim = 2.0 * PI * green(&d, z, a).unwrap() + eps.ln();
        assert!((lim - robin_data(&d, a).unwrap().h0).abs() < 1e-5, "{d:?}");
    }
}

#[test]
fn h1_is_derivative_of_h0() {
    let mut r = rng();
    for d in [disk1(), DomainDescriptor::HalfPlane, DomainDescriptor::SlitPlane] {
        for _ in 0..10 {
            let a = random_in(&d, &mut r);
            let h = 1e-5;
            let f = |z: Complex64| robin_data(&d, z).unwrap().h0;
            let dx = (f(a + h) - f(a - h)) / (2.0 * h);
            let dy = (f(a + I * h) - f(a - I * h)) / (2.0 * h);
            let fd = 0.5 * c(dx, -dy);
            let h1 = robin_data(&d, a).unwrap().h1;
            assert!((fd - h1).norm() < 1e-6 * (1.0 + h1.norm()), "{d:?} a={a}");
        }
    }
}

#[test]
fn slit_plane_robin_formula() {
    // h0 = log(4|w| Im w), h1 = 1/(4z) + 1/(4 i w Im w), w = √z in the upper half-plane
    let z = c(-0.7, 1.3);
    let w = z.sqrt();
    let w = if w.im > 0.0 { w } else { -w };
    let e = robin_data(&DomainDescriptor::SlitPlane, z).unwrap();
    assert!((e.h0 - (4.0 * w.norm() * w.im).ln()).abs() < 1e-14);
    assert!((e.h1 - (1.0 / (4.0 * z) + 1.0 / (4.0 * I * w * w.im))).norm() < 1e-14);
    // tight on the negative axis: h0 = log 4d
    let e = robin_data(&DomainDescriptor::SlitPlane, c(-2.0, 0.0)).unwrap();
    assert!((e.h0 - 8f64.ln()).abs() < 1e-14);
}

#[test]
fn contour_h1_matches_closed_form_in_disk() {
    let mut r = rng();
    for rad in [1.0, 2.0] {
        let d = DomainDescriptor::Disk { r: rad };
        for _ in 0..20 {
            let a = random_in(&d, &mut r) * 0.9;
            let q = h1_contour(&d, a, 256).unwrap();
            let exact = robin_data(&d, a).unwrap().h1;
            assert!((q.value - exact).norm() < 1e-8, "a={a}: {} vs {exact}", q.value);
        }
    }
    let q = h1_contour(&disk1(), c(0.0, 0.0), 128).unwrap();
    assert!(q.value.norm() < 1e-15);
}

#[test]
fn contour_integrand_example() {
    // ∮ (∂G/∂z)² dz at a = 0.5 equals h1/(4πi) with h1 = −2/3
    let f = |z: Complex64| green_dz(&disk1(), z, c(0.5, 0.0)).map(|g| g * g);
    let v = contour_integral(f, &Curve::circle(c(0.0, 0.0), 1.0), 256).unwrap();
    assert!((v - c(-2.0 / 3.0, 0.0) / (4.0 * PI * I)).norm() < 1e-14);
}

#[test]
fn contour_h1_half_plane() {
    let q = h1_contour(&DomainDescriptor::HalfPlane, I, 200).unwrap();
    assert!((q.value - c(0.0, -0.5)).norm() < 1e-4);
    assert!(q.error < 1e-4);
}

#[test]
fn poisson_examples() {
    let v = poisson_value(|_| 1.0, c(0.2, -0.5), 1.0, 64).unwrap();
    assert!((v - 1.0).abs() < 1e-14);
    let v = poisson_value(|z| z.re, c(0.3, 0.0), 1.0, 64).unwrap();
    assert!((v - 0.3).abs() < 1e-14);
    let v = poisson_value(|z| (z * z).re, c(0.3, 0.2), 1.0, 64).unwrap();
    assert!((v - 0.05).abs() < 1e-14);
    assert!(matches!(poisson_value(|_| 1.0, c(1.0, 0.0), 1.0, 64), Err(Error::Domain { .. })));
}

#[test]
fn transport_examples() {
    let src = robin_data(&disk1(), c(0.3, 0.4)).unwrap();
    assert_eq!(conformal_transport(&src, c(1.0, 0.0), c(0.0, 0.0)).unwrap(), src);
    // scaling onto the disk of radius |c|
    let k = c(1.2, -1.6);
    let t = conformal_transport(&src, k, c(0.0, 0.0)).unwrap();
    let img = robin_data(&DomainDescriptor::Disk { r: k.norm() }, k * c(0.3, 0.4)).unwrap();
    assert!((t.h0 - img.h0).abs() < 1e-14 && (t.h0 - src.h0 - k.norm().ln()).abs() < 1e-14);
    assert!((t.h1 - img.h1).norm() < 1e-14);
    assert!(matches!(conformal_transport(&src, c(0.0, 0.0), c(1.0, 0.0)), Err(Error::SingularMap)));
}

#[test]
fn transport_under_disk_automorphisms() {
    let mut r = rng();
    for _ in 0..20 {
        let b = random_in(&disk1(), &mut r) * 0.9;
        let zt = random_in(&disk1(), &mut r) * 0.9;
        let den = 1.0 - b.conj() * zt;
        let f = (zt - b) / den;
        let fp = (1.0 - b.norm_sqr()) / (den * den);
        let fpp = 2.0 * b.conj() * (1.0 - b.norm_sqr()) / (den * den * den);
        let t = conformal_transport(&robin_data(&disk1(), zt).unwrap(), fp, fpp).unwrap();
        let img = robin_data(&disk1(), f).unwrap();
        assert!((t.h0 - img.h0).abs() < 1e-10);
        assert!((t.h1 - img.h1).norm() < 1e-10);
    }
}

#[test]
fn curvature_examples() {
    let k = curvature_of_metric(|z| robin_data(&disk1(), z).map(|e| e.h0), c(0.5, 0.0), 1e-3).unwrap();
    assert!((k + 4.0).abs() < 1e-7);
    let k = curvature_of_metric(|z| Ok(-(2.0 / (1.0 + z.norm_sqr())).ln()), c(0.2, 0.0), 1e-3).unwrap();
    assert!((k - 1.0).abs() < 1e-7);
    let k = curvature_of_metric(|_| Ok(0.7), c(0.2, 0.0), 1e-3).unwrap();
    assert_eq!(k, 0.0);
}

#[test]
#[allow(clippy::approx_constant)]
fn bergman_kernel_of_disk() {
    assert!((bergman_disk(c(0.0, 0.0), c(0.0, 0.0)).re - 0.3183099).abs() < 1e-7);
    let (z, a) = (c(0.1, 0.5), c(-0.3, 0.2));
    assert!((bergman_disk(a, z) - bergman_disk(z, a).conj()).norm() < 1e-15);
    let reg = Region::Disk { center: c(0.0, 0.0), radius: 1.0 };
    let a = c(0.4, 0.0);
    let q = area_quadrature(|z| Ok(z * z * bergman_disk(z, a).conj()), &reg, 48, &[]).unwrap();
    assert!((q.value - 0.16).norm() < 1e-10);
    let q = area_quadrature(|z| Ok(bergman_disk(z, c(0.0, 0.0)).conj()), &reg, 16, &[]).unwrap();
    assert!((q.value - 1.0).norm() < 1e-12);
}

#[test]
fn laplacian_of_robin_function_is_bergman_diagonal() {
    let a = c(0.5, 0.0);
    let lap = laplacian_richardson(|z| robin_data(&disk1(), z).map(|e| e.h0), a, 1e-3).unwrap();
    let k = 4.0 * PI * bergman_disk(a, a).re;
    assert!((k - 64.0 / 9.0).abs() < 1e-12);
    assert!((lap + k).abs() < 1e-8, "{lap}");
    // the plain 5-point rule is second order only
    let lap2 = laplacian_at(|z| robin_data(&disk1(), z).map(|e| e.h0), a, 1e-3).unwrap();
    assert!((lap2 + k).abs() < 1e-4);
}

#[test]
fn robin_function_grows_with_the_domain() {
    let mut r = rng();
    for _ in 0..20 {
        let a = random_in(&disk1(), &mut r);
        let h_small = robin_data(&disk1(), a).unwrap().h0;
        let h_big = robin_data(&DomainDescriptor::Disk { r: 2.0 }, a).unwrap().h0;
        assert!(h_small < h_big);
    }
}

#[test]
fn robin_sandwich_closed_forms() {
    let mut r = rng();
    for d in [disk1(), DomainDescriptor::Disk { r: 3.0 }, DomainDescriptor::HalfPlane, DomainDescriptor::SlitPlane] {
        for _ in 0..50 {
            let a = random_in(&d, &mut r);
            let h0 = robin_data(&d, a).unwrap().h0;
            let dist = d.boundary_distance(a);
            let upper = if d.is_convex() { (2.0 * dist).ln() } else { (4.0 * dist).ln() };
            assert!(dist.ln() <= h0 + 1e-12 && h0 <= upper + 1e-12, "{d:?} a={a}");
        }
    }
    // tightness
    let e = robin_data(&DomainDescriptor::HalfPlane, c(0.3, 0.7)).unwrap();
    assert!((e.h0 - 1.4f64.ln()).abs() < 1e-14);
}

/// Continuum Green function of `[0,w]×[0,h]` by a sine series in y.
fn sine_series_green(w: f64, h: f64, z: Complex64, a: Complex64) -> f64 {
    let (xl, xg) = if z.re < a.re { (z.re, a.re) } else { (a.re, z.re) };
    let mut s = 0.0;
    for n in 1..200 {
        let k = n as f64 * PI / h;
        // sinh(k xl) sinh(k (w − xg)) / (k sinh(k w)) without overflow
        let num = (-k * (xg - xl)).exp() * (1.0 - (-2.0 * k * xl).exp()) * (1.0 - (-2.0 * k * (w - xg)).exp());
        let g = num / (2.0 * k * (1.0 - (-2.0 * k * w).exp()));
        s += 2.0 / h * (k * z.im).sin() * (k * a.im).sin() * g;
    }
    s
}

/// Rectangle regular part at the diagonal by the method of images on the
/// doubled torus with periods 2w and 2ih.
fn image_robin(w: f64, h: f64, a: Complex64) -> f64 {
    let l = lattice_constants(c(0.0, h / w)).unwrap();
    let al = a / (2.0 * w);
    let t = |z: Complex64| theta1(z, &l).norm().ln();
    -(l.theta1_prime0().norm() / (2.0 * w)).ln() - t(2.0 * al) + t(al - al.conj()) + t(al + al.conj())
}

#[test]
fn fd_green_matches_sine_series() {
    let g = fd_dirichlet_green(1.0, 1.0, 128, c(0.5, 0.5)).unwrap();
    let node = g.grid.node_of(c(0.25, 0.5)).unwrap();
    let exact = sine_series_green(1.0, 1.0, c(0.25, 0.5), c(0.5, 0.5));
    assert!((g.at(node.0, node.1) - exact).abs() < 2e-4);
    // the same oracle away from the source row, for the interpolating evaluator
    let v = green(&DomainDescriptor::Rectangle { w: 1.0, h: 1.0, grid: 128 }, c(0.25, 0.25), c(0.5, 0.5)).unwrap();
    assert!((v - sine_series_green(1.0, 1.0, c(0.25, 0.25), c(0.5, 0.5))).abs() < 2e-4);
}

#[test]
fn rectangle_robin_matches_image_oracle() {
    let d = DomainDescriptor::Rectangle { w: 2.0, h: 1.0, grid: 64 };
    for a in [c(1.0, 0.5), c(0.5, 0.25), c(1.625, 0.75)] {
        let e = robin_data(&d, a).unwrap();
        let exact = image_robin(2.0, 1.0, a);
        assert!((e.h0 - exact).abs() < 1e-4, "a={a}: {} vs {exact}", e.h0);
        let hh = 1e-5;
        let dx = (image_robin(2.0, 1.0, a + hh) - image_robin(2.0, 1.0, a - hh)) / (2.0 * hh);
        let dy = (image_robin(2.0, 1.0, a + I * hh) - image_robin(2.0, 1.0, a - I * hh)) / (2.0 * hh);
        assert!((e.h1 - 0.5 * c(dx, -dy)).norm() < 1e-3, "a={a}: {} vs {}", e.h1, 0.5 * c(dx, -dy));
    }
}

#[test]
fn rectangle_sandwich() {
    let d = DomainDescriptor::Rectangle { w: 1.0, h: 1.0, grid: 32 };
    let mut r = rng();
    for _ in 0..20 {
        let a = c(r.gen_range(2..=30) as f64 / 32.0, r.gen_range(2..=30) as f64 / 32.0);
        let h0 = robin_data(&d, a).unwrap().h0;
        let dist = d.boundary_distance(a);
        assert!(dist.ln() <= h0 && h0 <= (2.0 * dist).ln(), "a={a}");
    }
}
