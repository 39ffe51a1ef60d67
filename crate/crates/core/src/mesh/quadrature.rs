//! Symmetric quadrature rules on triangles with positive weights.

use crate::error::{Error, Result};

/// Points in barycentric coordinates; weights sum to one and are scaled by
/// the element area at use.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub degree: usize,
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64; 3], f64)> {
        self.points.iter().zip(self.weights.iter().copied())
    }

    /// `int f` over the triangle with vertices `v`.
    pub fn integrate(&self, v: &[[f64; 2]; 3], f: impl Fn([f64; 2]) -> f64) -> f64 {
        let area = 0.5
            * ((v[1][0] - v[0][0]) * (v[2][1] - v[0][1]) - (v[2][0] - v[0][0]) * (v[1][1] - v[0][1])).abs();
        area * self
            .iter()
            .map(|(l, w)| {
                let x = [
                    l[0] * v[0][0] + l[1] * v[1][0] + l[2] * v[2][0],
                    l[0] * v[0][1] + l[1] * v[1][1] + l[2] * v[2][1],
                ];
                w * f(x)
            })
            .sum::<f64>()
    }

    fn push_orbit3(&mut self, a: f64, w: f64) {
        let b = 1.0 - 2.0 * a;
        for p in [[b, a, a], [a, b, a], [a, a, b]] {
            self.points.push(p);
            self.weights.push(w);
        }
    }

    fn push_orbit6(&mut self, a: f64, b: f64, w: f64) {
        let c = 1.0 - a - b;
        for p in [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
            self.points.push(p);
            self.weights.push(w);
        }
    }
}

/// Rules exact for polynomials up to `degree`; supported degrees are 2
/// (edge midpoints), 4 (six points) and 6 (twelve points).
pub fn triangle_quadrature(degree: usize) -> Result<QuadratureRule> {
    let mut rule = QuadratureRule { degree, points: Vec::new(), weights: Vec::new() };
    match degree {
        2 => rule.push_orbit3(0.5, 1.0 / 3.0),
        4 => {
            rule.push_orbit3(
                0.445_948_490_915_964_886_318_329_253_883,
                0.223_381_589_678_011_465_944_640_566_134,
            );
            rule.push_orbit3(
                0.091_576_213_509_770_743_459_571_463_402,
                0.109_951_743_655_321_867_388_292_767_199,
            );
        }
        6 => {
            rule.push_orbit3(0.249_286_745_170_910_421_136, 0.116_786_275_726_379_366_030);
            rule.push_orbit3(0.063_089_014_491_502_228_340, 0.050_844_906_370_206_816_921);
            rule.push_orbit6(
                0.053_145_049_844_816_947_353,
                0.310_352_451_033_784_405_416,
                0.082_851_075_618_373_575_194,
            );
        }
        d => return Err(Error::Quadrature(d)),
    }
    Ok(rule)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `int_T x^p y^q` over the reference triangle `(0,0), (1,0), (0,1)` is
    /// `p! q! / (p + q + 2)!`.
    fn monomial_integral(p: u32, q: u32) -> f64 {
        let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
        fact(p) * fact(q) / fact(p + q + 2)
    }

    const REF: [[f64; 2]; 3] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];

    #[test]
    fn weights_are_positive_and_sum_to_one() {
        for d in [2, 4, 6] {
            let r = triangle_quadrature(d).unwrap();
            assert!(r.weights.iter().all(|w| *w > 0.0));
            assert!((r.weights.iter().sum::<f64>() - 1.0).abs() < 1e-15);
            for p in &r.points {
                assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn exact_up_to_declared_degree() {
        for d in [2usize, 4, 6] {
            let r = triangle_quadrature(d).unwrap();
            for p in 0..=d as u32 {
                for q in 0..=(d as u32 - p) {
                    let got = r.integrate(&REF, |x| x[0].powi(p as i32) * x[1].powi(q as i32));
                    let want = monomial_integral(p, q);
                    assert!(
                        ((got - want) / want).abs() < 1e-14,
                        "degree {d} rule, x^{p} y^{q}: {got} vs {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn x2y2_under_degree_four() {
        let r = triangle_quadrature(4).unwrap();
        let got = r.integrate(&REF, |x| x[0] * x[0] * x[1] * x[1]);
        assert!((got - 1.0 / 180.0).abs() < 1e-16);
    }

    #[test]
    fn constant_gives_area() {
        let r = triangle_quadrature(4).unwrap();
        let tri = [[0.3, 0.1], [2.0, 0.5], [1.0, 1.7]];
        let area = 0.5 * ((2.0 - 0.3) * (1.7 - 0.1) - (1.0 - 0.3) * (0.5 - 0.1));
        assert!((r.integrate(&tri, |_| 1.0) - area).abs() < 1e-15);
    }

    #[test]
    fn unsupported_degree() {
        assert!(matches!(triangle_quadrature(5), Err(Error::Quadrature(5))));
        assert!(triangle_quadrature(3).is_err());
    }
}
