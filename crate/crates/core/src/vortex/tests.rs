use super::*;
use crate::c;

fn plane(vs: &[(Complex64, f64)]) -> VortexSystem {
    VortexSystem::new(VortexDomain::Plane, vs.iter().map(|&(z, gamma)| Vortex { z, gamma }).collect()).unwrap()
}

fn disk(vs: &[(Complex64, f64)]) -> VortexSystem {
    VortexSystem::new(VortexDomain::Disk { r: 1.0 }, vs.iter().map(|&(z, gamma)| Vortex { z, gamma }).collect())
        .unwrap()
}

#[test]
fn pair_force_examples() {
    let (a, b) = (c(0.0, 0.0), c(1.0, 0.0));
    let f = pair_force(a, b, 1.0, -1.0).unwrap();
    assert!((f.norm() - 1.0 / (2.0 * PI)).abs() < 1e-15);
    assert!((f / f.norm() - (b - a)).norm() < 1e-15);
    let rep = pair_force(a, b, 1.0, 1.0).unwrap();
    assert!(rep.re < 0.0);
    let (p, q) = (c(0.3, -1.2), c(-0.7, 0.4));
    let fa = pair_force(p, q, 0.8, -2.1).unwrap();
    let fb = pair_force(q, p, -2.1, 0.8).unwrap();
    assert!((fa + fb).norm() < 1e-15);
    assert!(pair_force(a, a, 1.0, 1.0).is_err());
}

#[test]
fn bound_force_examples() {
    assert_eq!(bound_vortex_force(c(0.0, 0.0), 3.0), c(0.0, 0.0));
    let a = c(0.5, 0.0);
    let h1 = -a.conj() / (1.0 - a.norm_sqr());
    assert!((h1.re + 2.0 / 3.0).abs() < 1e-15);
    let f = bound_vortex_force(h1, 1.0);
    assert!((f - c(1.0 / (3.0 * PI), 0.0)).norm() < 1e-15);
    // a second vortex of strength −Γ plays the role of the regular part
    let (a, b) = (c(0.2, 0.1), c(-0.4, 0.9));
    let g = 1.3;
    let via_h1 = bound_vortex_force(1.0 / (a - b), g);
    assert!((via_h1 - pair_force(a, b, g, -g).unwrap()).norm() < 1e-14);
}

#[test]
fn forced_velocity_examples() {
    let h1 = c(0.3, -0.4);
    let free = forced_vortex_velocity(h1, 1.7, c(0.0, 0.0)).unwrap();
    assert!((free - 1.7 / (2.0 * PI * I) * h1.conj()).norm() < 1e-15);
    let held = forced_vortex_velocity(h1, 1.7, bound_vortex_force(h1, 1.7)).unwrap();
    assert!(held.norm() < 1e-15);
    assert!((forced_vortex_velocity(c(0.0, 0.0), 1.0, I).unwrap() - 1.0).norm() < 1e-15);
    assert!(forced_vortex_velocity(h1, 0.0, I).is_err());
}

#[test]
fn free_velocity_examples() {
    assert_eq!(free_vortex_velocity(&plane(&[(c(0.3, 0.2), 1.0)]), 0).unwrap(), c(0.0, 0.0));
    let s = disk(&[(c(0.5, 0.0), 1.0)]);
    let v = free_vortex_velocity(&s, 0).unwrap();
    assert!(v.re.abs() < 1e-15);
    assert!((v.im - 0.5 / (2.0 * PI * 0.75)).abs() < 1e-15);
    let pair = plane(&[(c(0.0, 0.0), 1.0), (c(1.0, 0.0), -1.0)]);
    for k in 0..2 {
        let v = free_vortex_velocity(&pair, k).unwrap();
        assert!((v - I / (2.0 * PI)).norm() < 1e-15);
    }
    assert!(free_vortex_velocity(&pair, 2).is_err());
}

#[test]
fn velocity_equals_forced_law_with_pair_h1() {
    // h1 assembled from the other vortex matches the single-vortex law
    let (a, b) = (c(0.1, 0.2), c(-0.3, 0.5));
    let (ga, gb) = (1.4, -0.6);
    let s = plane(&[(a, ga), (b, gb)]);
    let h1 = -(gb / ga) / (a - b);
    let v = forced_vortex_velocity(h1, ga, c(0.0, 0.0)).unwrap();
    assert!((v - free_vortex_velocity(&s, 0).unwrap()).norm() < 1e-15);
}

#[test]
fn disk_velocity_rotation_equivariant() {
    let s = disk(&[(c(0.3, 0.1), 1.0), (c(-0.2, 0.5), -0.7), (c(0.1, -0.6), 2.0)]);
    let rot = (0.7 * I).exp();
    let rs = VortexSystem::new(s.domain, s.vortices.iter().map(|v| Vortex { z: v.z * rot, gamma: v.gamma }).collect())
        .unwrap();
    for k in 0..3 {
        let v = free_vortex_velocity(&s, k).unwrap();
        let w = free_vortex_velocity(&rs, k).unwrap();
        assert!((w - rot * v).norm() < 1e-12);
    }
}

#[test]
fn stream_function_examples() {
    let s = disk(&[(c(0.3, -0.2), 1.0)]);
    for k in 0..12 {
        let z = (2.0 * PI * I * (k as f64 / 12.0)).exp();
        assert!(stream_function(&s, z).unwrap().abs() < 1e-14);
    }
    let s2 = disk(&[(c(0.3, -0.2), 2.0)]);
    let z = c(-0.1, 0.4);
    assert!((stream_function(&s2, z).unwrap() - 2.0 * stream_function(&s, z).unwrap()).abs() < 1e-15);
    // ψ + (Γ/2π) log|z−a| → (Γ/2π) h0(a)
    let a = c(0.3, -0.2);
    let h0 = (1.0 - a.norm_sqr()).ln();
    let z = a + c(1e-7, 0.0);
    let reg = stream_function(&s, z).unwrap() + (z - a).norm().ln() / (2.0 * PI);
    assert!((reg - h0 / (2.0 * PI)).abs() < 1e-7);
    assert!(matches!(stream_function(&s, a), Err(Error::Pole { .. })));
}

#[test]
fn plane_energy_matches_discrete_energy() {
    let s = plane(&[(c(0.0, 0.0), 1.0), (c(0.4, 0.3), -0.5), (c(-1.0, 0.2), 2.0)]);
    let e = crate::equilibrium::discrete_energy(&s.positions(), &s.strengths()).unwrap();
    assert!((kirchhoff_routh(&s).unwrap() - e).abs() < 1e-15);
}

#[test]
fn kirchhoff_routh_gradient_generates_velocity() {
    // ∂W/∂x_k = −Γ_k dy_k/dt, ∂W/∂y_k = Γ_k dx_k/dt
    let s = disk(&[(c(0.3, 0.1), 1.0), (c(-0.2, 0.5), -0.7)]);
    let h = 1e-6;
    for k in 0..2 {
        let w = |dz: Complex64| {
            let mut t = s.clone();
            t.vortices[k].z += dz;
            kirchhoff_routh(&t).unwrap()
        };
        let wx = (w(c(h, 0.0)) - w(c(-h, 0.0))) / (2.0 * h);
        let wy = (w(c(0.0, h)) - w(c(0.0, -h))) / (2.0 * h);
        let v = free_vortex_velocity(&s, k).unwrap();
        let g = s.vortices[k].gamma;
        assert!((wx + g * v.im).abs() < 1e-8, "{wx} vs {}", -g * v.im);
        assert!((wy - g * v.re).abs() < 1e-8);
    }
}

#[test]
fn pair_translation() {
    let s = plane(&[(c(0.0, 0.0), 1.0), (c(1.0, 0.0), -1.0)]);
    let tr = simulate(&s, 10.0, 1e-10).unwrap();
    let end = tr.last_state();
    assert!((end[0] - 10.0 * I / (2.0 * PI)).norm() < 1e-6);
    assert!(tr.monitor_drift("energy").unwrap() < 1e-8);
}

#[test]
fn equal_pair_rotation_period() {
    let period = 2.0 * PI * PI;
    let s = plane(&[(c(-0.5, 0.0), 1.0), (c(0.5, 0.0), 1.0)]);
    let tr = simulate(&s, period, 1e-11).unwrap();
    let end = tr.last_state();
    assert!((end[0] - c(-0.5, 0.0)).norm() < 1e-6);
    assert!((end[1] - c(0.5, 0.0)).norm() < 1e-6);
    for name in ["energy", "moment_re", "moment_im", "angular"] {
        assert!(tr.monitor_drift(name).unwrap() < 1e-8, "{name}");
    }
}

#[test]
fn disk_vortex_radius_conserved() {
    let s = disk(&[(c(0.5, 0.0), 1.0)]);
    let period = 4.0 * PI * PI * 0.75;
    let tr = simulate(&s, period, 1e-12).unwrap();
    let drift = tr.states.iter().map(|st| (st[0].norm() - 0.5).abs()).fold(0.0, f64::max);
    assert!(drift < 1e-9, "{drift}");
    assert!((tr.last_state()[0] - c(0.5, 0.0)).norm() < 1e-6);
}

#[test]
fn disk_multi_vortex_energy_conserved() {
    let s = disk(&[(c(0.3, 0.1), 1.0), (c(-0.2, 0.4), -0.7), (c(0.0, -0.5), 0.5)]);
    let tr = simulate(&s, 5.0, 1e-10).unwrap();
    assert!(tr.monitor_drift("energy").unwrap() < 1e-7);
}

#[test]
fn time_reversal() {
    let tol = 1e-10;
    let s = plane(&[(c(0.0, 0.0), 1.0), (c(1.0, 0.2), 0.5), (c(-0.3, 0.8), -0.8)]);
    let fwd = simulate(&s, 3.0, tol).unwrap();
    // negating every circulation reverses time
    let back = VortexSystem::new(
        s.domain,
        fwd.last_state().iter().zip(&s.vortices).map(|(&z, v)| Vortex { z, gamma: -v.gamma }).collect(),
    )
    .unwrap();
    let ret = simulate(&back, 3.0, tol).unwrap();
    for (z, v) in ret.last_state().iter().zip(&s.vortices) {
        assert!((z - v.z).norm() < 100.0 * tol);
    }
}

#[test]
fn collisions_and_validation() {
    assert!(matches!(
        VortexSystem::new(VortexDomain::Plane, vec![Vortex { z: c(0.0, 0.0), gamma: 1.0 }; 2]),
        Err(Error::Collision { .. })
    ));
    assert!(VortexSystem::new(VortexDomain::Disk { r: 1.0 }, vec![Vortex { z: c(1.2, 0.0), gamma: 1.0 }]).is_err());
    let json = r#"{"domain":{"kind":"disk","R":1.0},"vortices":[{"z":[0.5,0.0],"gamma":1.0}]}"#;
    let s: VortexSystem = serde_json::from_str(json).unwrap();
    assert_eq!(s, disk(&[(c(0.5, 0.0), 1.0)]));
}

#[test]
fn three_vortex_collapse_is_a_collision() {
    // Γ1Γ2 + Γ2Γ3 + Γ3Γ1 = 0 and Σ ΓjΓk|zj − zk|² = 0: self-similar collapse.
    let s = plane(&[(c(-1.0, 0.0), 2.0), (c(1.0, 0.0), 2.0), (c(1.0, 2f64.sqrt()), -1.0)]);
    match simulate(&s, 50.0, 1e-10) {
        Err(Error::Collision { time }) => assert!(time > 1.0 && time < 50.0, "{time}"),
        other => panic!("expected a collision, got {other:?}"),
    }
}
