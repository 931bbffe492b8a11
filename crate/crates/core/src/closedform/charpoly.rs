//! Numeric check that `α·ζ^j` and `β·ζ^j` (`ζ` a primitive `r`-th root of
//! unity) are the `2r` roots of `x^{2r} − 2(κ+1)·x^r + 1`.

use crate::exactmath::BigFloat;
use crate::params::MultiplierParams;

#[derive(Debug, Clone)]
struct Complex {
    re: BigFloat,
    im: BigFloat,
}

impl Complex {
    fn real(re: BigFloat) -> Self {
        let im = BigFloat::zero(re.precision());
        Complex { re, im }
    }

    fn mul(&self, o: &Complex) -> Complex {
        Complex {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }

    fn pow(&self, e: u64) -> Complex {
        let one = BigFloat::from_i64(1, self.re.precision());
        let mut acc = Complex::real(one);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// `max(|re|, |im|)`; enough for a residual bound.
    fn max_abs(&self) -> BigFloat {
        let (a, b) = (self.re.abs(), self.im.abs());
        if a > b {
            a
        } else {
            b
        }
    }
}

#[derive(Debug, Clone)]
pub struct CharPolyReport {
    pub rank: usize,
    /// One residual `|P(root)|` per root, `α`-family first.
    pub residuals: Vec<BigFloat>,
    pub max_residual: BigFloat,
    /// `|∏ roots − 1|`; the constant term of `P` is `1`.
    pub product_error: BigFloat,
}

impl CharPolyReport {
    pub fn max_residual_log2(&self) -> f64 {
        if self.max_residual.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.max_residual.log2_abs()
        }
    }
}

pub fn char_poly_root_check(p: &MultiplierParams, prec: u32) -> CharPolyReport {
    let r = p.r;
    let f = |x: i64| BigFloat::from_i64(x, prec);
    let theta = &BigFloat::from_int(&(&p.kappa + 1u32), prec)
        + &(&BigFloat::from_rat(p.theta.q(), prec) * &BigFloat::from_int(&p.d, prec).sqrt());
    let alpha = theta.nth_root(r as u32);
    let beta = (&f(1) / &theta).nth_root(r as u32);
    let two_k1 = BigFloat::from_int(&((&p.kappa + 1u32) * 2u32), prec);

    let angle = &(&f(2) * &BigFloat::pi(prec)) / &f(r as i64);
    let roots: Vec<Complex> = [&alpha, &beta]
        .into_iter()
        .flat_map(|base| {
            let angle = angle.clone();
            (0..r).map(move |j| {
                let (c, s) = (&angle * &f(j as i64)).cos_sin();
                Complex {
                    re: base * &c,
                    im: base * &s,
                }
            })
        })
        .collect();

    let residuals: Vec<BigFloat> = roots
        .iter()
        .map(|z| {
            let zr = z.pow(r as u64);
            let z2r = zr.mul(&zr);
            Complex {
                re: &(&z2r.re - &(&two_k1 * &zr.re)) + &f(1),
                im: &z2r.im - &(&two_k1 * &zr.im),
            }
            .max_abs()
        })
        .collect();
    let max_residual = residuals
        .iter()
        .cloned()
        .fold(BigFloat::zero(prec), |m, x| if x > m { x } else { m });

    let product = roots.iter().fold(Complex::real(f(1)), |acc, z| acc.mul(z));
    let product_error = Complex {
        re: &product.re - &f(1),
        im: product.im,
    }
    .max_abs();

    CharPolyReport {
        rank: r,
        residuals,
        max_residual,
        product_error,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::DEFAULT_PRECISION;
    use crate::params::known_params;

    #[test]
    fn roots_satisfy_the_polynomial() {
        for k in [2, 3, 5, 8, 10, 13] {
            let rep = char_poly_root_check(&known_params(k).unwrap(), DEFAULT_PRECISION);
            assert_eq!(rep.residuals.len(), 2 * rep.rank);
            assert!(
                rep.max_residual_log2() < -150.0,
                "k={k}: {}",
                rep.max_residual_log2()
            );
            assert!(rep.product_error.is_zero() || rep.product_error.log2_abs() < -150.0);
        }
    }

    #[test]
    fn wrong_kappa_is_visible() {
        let mut p = known_params(5).unwrap();
        p.kappa += 1;
        let rep = char_poly_root_check(&p, DEFAULT_PRECISION);
        assert!(rep.max_residual_log2() > 0.0);
    }
}
