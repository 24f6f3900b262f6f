use num_complex::Complex64;

use crate::{c, Error, Result, I};

/// Which Wirtinger operator to approximate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wirtinger {
    /// ∂/∂z = ½(∂x − i∂y)
    Dz,
    /// ∂/∂z̄ = ½(∂x + i∂y)
    Dzbar,
    /// ∂²/∂z∂z̄ = ¼Δ
    DzDzbar,
}

fn check_step(h: f64) -> Result<()> {
    if !(1e-8..=1e-2).contains(&h) {
        return Err(Error::Parameter(format!("finite-difference step {h} outside [1e-8, 1e-2]")));
    }
    Ok(())
}

/// Central-difference Wirtinger derivative of `f` at `z0`.
///
/// Errors from `f` (for instance a domain error when the stencil leaves
/// the domain) are propagated unchanged.
pub fn wirtinger_derivative<F>(f: F, z0: Complex64, which: Wirtinger, h: f64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    check_step(h)?;
    let fx = (f(z0 + h)? - f(z0 - h)?) / (2.0 * h);
    let fy = (f(z0 + I * h)? - f(z0 - I * h)?) / (2.0 * h);
    Ok(match which {
        Wirtinger::Dz => 0.5 * (fx - I * fy),
        Wirtinger::Dzbar => 0.5 * (fx + I * fy),
        Wirtinger::DzDzbar => {
            let f0 = f(z0)?;
            let lap = (f(z0 + h)? + f(z0 - h)? + f(z0 + I * h)? + f(z0 - I * h)? - 4.0 * f0) / (h * h);
            0.25 * lap
        }
    })
}

/// Mixed derivative ∂²f/∂z∂ā of a two-point function `f(z, a)`.
pub fn mixed_z_abar<F>(f: F, z0: Complex64, a0: Complex64, h: f64) -> Result<Complex64>
where
    F: Fn(Complex64, Complex64) -> Result<Complex64>,
{
    check_step(h)?;
    // cross derivative ∂²f/∂u∂v with u a direction in z, v a direction in a
    let cross = |dz: Complex64, da: Complex64| -> Result<Complex64> {
        let pp = f(z0 + dz * h, a0 + da * h)?;
        let pm = f(z0 + dz * h, a0 - da * h)?;
        let mp = f(z0 - dz * h, a0 + da * h)?;
        let mm = f(z0 - dz * h, a0 - da * h)?;
        Ok((pp - pm - mp + mm) / (4.0 * h * h))
    };
    let one = c(1.0, 0.0);
    let xx = cross(one, one)?;
    let xy = cross(one, I)?;
    let yx = cross(I, one)?;
    let yy = cross(I, I)?;
    // (∂x − i∂y)(∂ax + i∂ay)/4
    Ok(0.25 * (xx + I * xy - I * yx + yy))
}

/// Five-point Laplacian from `[center, east, west, north, south]` samples.
pub fn fd_laplacian(samples: [f64; 5], h: f64) -> Result<f64> {
    if samples.iter().any(|v| !v.is_finite()) || !(h > 0.0) {
        return Err(Error::Parameter("non-finite stencil sample or step".into()));
    }
    let [c0, e, w, n, s] = samples;
    Ok((e + w + n + s - 4.0 * c0) / (h * h))
}

/// Five-point Laplacian of a real field sampled around `z`.
pub fn laplacian_at<F>(f: F, z: Complex64, h: f64) -> Result<f64>
where
    F: Fn(Complex64) -> Result<f64>,
{
    fd_laplacian([f(z)?, f(z + h)?, f(z - h)?, f(z + I * h)?, f(z - I * h)?], h)
}

/// Five-point Laplacian with one Richardson step (`h` and `h/2`), error O(h⁴).
pub fn laplacian_richardson<F>(f: F, z: Complex64, h: f64) -> Result<f64>
where
    F: Fn(Complex64) -> Result<f64>,
{
    let coarse = laplacian_at(&f, z, h)?;
    let fine = laplacian_at(&f, z, 0.5 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dzbar_of_conjugate_is_one() {
        let z0 = c(0.3, -0.7);
        let d = wirtinger_derivative(|z| Ok(z.conj()), z0, Wirtinger::Dzbar, 1e-5).unwrap();
        assert!((d - 1.0).norm() < 1e-9);
        let d = wirtinger_derivative(|z| Ok(z.conj()), z0, Wirtinger::Dz, 1e-5).unwrap();
        assert!(d.norm() < 1e-9);
    }

    #[test]
    fn mixed_of_modulus_squared_is_one() {
        let d = wirtinger_derivative(|z| Ok(c(z.norm_sqr(), 0.0)), c(0.4, 0.1), Wirtinger::DzDzbar, 1e-3).unwrap();
        assert!((d - 1.0).norm() < 1e-8);
    }

    #[test]
    fn holomorphic_sample_has_small_dzbar() {
        let d = wirtinger_derivative(|z| Ok(z.exp() * z), c(0.2, 0.5), Wirtinger::Dzbar, 1e-4).unwrap();
        assert!(d.norm() < 1e-6);
    }

    #[test]
    fn mixed_z_abar_of_product() {
        // f = z² ā² + |a|² : ∂z∂ā = 2z·2ā
        let f = |z: Complex64, a: Complex64| Ok(z * z * a.conj() * a.conj() + a.norm_sqr());
        let (z0, a0) = (c(0.3, 0.2), c(-0.1, 0.4));
        let d = mixed_z_abar(f, z0, a0, 1e-4).unwrap();
        assert!((d - 4.0 * z0 * a0.conj()).norm() < 1e-7);
    }

    #[test]
    fn laplacian_examples() {
        let l = laplacian_at(|z| Ok(z.norm_sqr()), c(1.1, -0.3), 1e-3).unwrap();
        assert!((l - 4.0).abs() < 1e-6);
        let l = laplacian_at(|z| Ok(z.norm().ln()), c(1.1, -0.3), 1e-3).unwrap();
        assert!(l.abs() < 1e-5);
    }

    #[test]
    fn rejects_bad_step() {
        assert!(matches!(wirtinger_derivative(Ok, c(0.0, 0.0), Wirtinger::Dz, 0.1), Err(Error::Parameter(_))));
    }
}
