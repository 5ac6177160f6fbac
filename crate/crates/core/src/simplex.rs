//! Geometry of the standard 2-simplex.
//!
//! The simplex `Delta = {x >= 0, x1 + x2 + x3 = 1}` carries the Riemannian
//! metric induced by half the Euclidean scalar product, normalized so that
//! the six vectors with coordinates `{-1, 0, 1}` have unit length. In that
//! metric
//!
//! ```text
//!   B = { (1, -1, 0),  (-1, -1, 2)/sqrt(3) }
//! ```
//!
//! is an orthonormal basis of the tangent plane `v1 + v2 + v3 = 0`, and the
//! derivative of a projectivized nonnegative matrix map `x -> Px / sigma(Px)`
//! expressed in `B` has the shape
//!
//! ```text
//!   [ a        b/sqrt(3) ]
//!   [ c*sqrt(3)    d     ]
//! ```
//!
//! with `a, b, c, d` rational whenever `P` and the base point are rational.
//! [`Jacobian2`] stores exactly those four rationals, which keeps every
//! squared quantity (`q`, `det^2`, `q/det^2`) exact: square roots and
//! logarithms only appear at reporting time.

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::mat3::Mat3;
use crate::rational::{big_ratio, Rational};

/// Barycentric point of the standard 2-simplex. Coordinates are exact,
/// nonnegative and sum to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexPoint {
    coords: [Rational; 3],
}

impl SimplexPoint {
    pub fn new(coords: [Rational; 3]) -> Result<Self> {
        let sum = &coords[0] + &coords[1] + &coords[2];
        if !sum.is_one() || coords.iter().any(|c| c.is_negative()) {
            return Err(Error::InvalidSimplexPoint {
                sum: sum.to_string(),
            });
        }
        Ok(SimplexPoint { coords })
    }

    /// The vertex `e_k` (0-based axis index).
    pub fn vertex(k: usize) -> Self {
        assert!(k < 3, "vertex index out of range");
        let mut coords = [Rational::zero(), Rational::zero(), Rational::zero()];
        coords[k] = Rational::one();
        SimplexPoint { coords }
    }

    pub fn barycenter() -> Self {
        SimplexPoint {
            coords: [big_ratio(1, 3), big_ratio(1, 3), big_ratio(1, 3)],
        }
    }

    /// Normalize a nonnegative integer triple to a simplex point.
    pub fn from_weights(a: u64, b: u64, c: u64) -> Result<Self> {
        let sum = a + b + c;
        if sum == 0 {
            return Err(Error::InvalidSimplexPoint {
                sum: "0".to_string(),
            });
        }
        let s = i64::try_from(sum).map_err(|_| Error::Overflow("simplex weights"))?;
        Ok(SimplexPoint {
            coords: [
                big_ratio(a as i64, s),
                big_ratio(b as i64, s),
                big_ratio(c as i64, s),
            ],
        })
    }

    pub fn coords(&self) -> &[Rational; 3] {
        &self.coords
    }

    pub fn to_f64(&self) -> [f64; 3] {
        [
            self.coords[0].to_f64().unwrap_or(f64::NAN),
            self.coords[1].to_f64().unwrap_or(f64::NAN),
            self.coords[2].to_f64().unwrap_or(f64::NAN),
        ]
    }
}

/// Tangent vector to the simplex: an exact triple summing to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangentVector {
    components: [Rational; 3],
}

impl TangentVector {
    pub fn new(components: [Rational; 3]) -> Result<Self> {
        let sum = &components[0] + &components[1] + &components[2];
        if !sum.is_zero() {
            return Err(Error::InvalidTangentVector {
                sum: sum.to_string(),
            });
        }
        Ok(TangentVector { components })
    }

    pub fn from_ints(v: [i64; 3]) -> Result<Self> {
        Self::new([
            Rational::from_integer(v[0].into()),
            Rational::from_integer(v[1].into()),
            Rational::from_integer(v[2].into()),
        ])
    }

    /// First basis vector of `B`.
    pub fn basis_first() -> Self {
        Self::from_ints([1, -1, 0]).unwrap()
    }

    /// `sqrt(3)` times the second basis vector of `B`; the scaled form is
    /// rational.
    pub fn basis_second_scaled() -> Self {
        Self::from_ints([-1, -1, 2]).unwrap()
    }

    pub fn components(&self) -> &[Rational; 3] {
        &self.components
    }
}

/// Coordinates of a tangent vector in the basis `B`.
///
/// The second coordinate is stored multiplied by `sqrt(3)` so that both
/// fields are rational and reconstruction is exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisCoords {
    pub alpha: Rational,
    pub beta_sqrt3: Rational,
}

impl BasisCoords {
    /// The real second coordinate `beta = beta_sqrt3 / sqrt(3)`.
    pub fn beta_f64(&self) -> f64 {
        self.beta_sqrt3.to_f64().unwrap_or(f64::NAN) / 3f64.sqrt()
    }

    /// Rebuild the tangent vector `alpha * b1 + beta * b2`.
    pub fn reconstruct(&self) -> TangentVector {
        let third = big_ratio(1, 3);
        let t = &self.beta_sqrt3 * &third;
        let v0 = &self.alpha - &t;
        let v1 = -&self.alpha - &t;
        let v2 = &t + &t;
        TangentVector {
            components: [v0, v1, v2],
        }
    }
}

/// Express a tangent vector in the basis `B`.
///
/// Solving the 2x2 system gives `alpha = v1 + v3/2` and
/// `beta = sqrt(3) * v3 / 2`.
pub fn basis_coords(v: &TangentVector) -> BasisCoords {
    let half = big_ratio(1, 2);
    let alpha = &v.components[0] + &(&v.components[2] * &half);
    let beta_sqrt3 = &v.components[2] * &big_ratio(3, 2);
    BasisCoords { alpha, beta_sqrt3 }
}

/// Projectivization `y -> P y / sigma(P y)` of a nonnegative integer matrix.
pub fn projective_apply(m: &Mat3, y: &SimplexPoint) -> Result<SimplexPoint> {
    if !m.is_nonnegative() {
        return Err(Error::InvalidConfig(
            "projective_apply requires a nonnegative matrix".into(),
        ));
    }
    let py = apply_rational(m, y.coords());
    let sigma = &(&py[0] + &py[1]) + &py[2];
    if sigma.is_zero() {
        return Err(Error::DegenerateProjection);
    }
    SimplexPoint::new([&py[0] / &sigma, &py[1] / &sigma, &py[2] / &sigma])
}

fn apply_rational(m: &Mat3, v: &[Rational; 3]) -> [Rational; 3] {
    let mut out = [Rational::zero(), Rational::zero(), Rational::zero()];
    for (i, row) in m.0.iter().enumerate() {
        let mut acc = Rational::zero();
        for (k, &a) in row.iter().enumerate() {
            if a != 0 {
                acc += &v[k] * &Rational::from_integer(a.into());
            }
        }
        out[i] = acc;
    }
    out
}

fn apply_ints(m: &Mat3, v: [i64; 3]) -> [Rational; 3] {
    let mut out = [Rational::zero(), Rational::zero(), Rational::zero()];
    for (i, row) in m.0.iter().enumerate() {
        let mut acc: i64 = 0;
        for (k, &a) in row.iter().enumerate() {
            acc += a * v[k];
        }
        out[i] = Rational::from_integer(acc.into());
    }
    out
}

/// 2x2 derivative of a projectivized matrix map, in the basis `B`.
///
/// The stored rationals `(a, b, c, d)` represent the real matrix
/// `[[a, b/sqrt(3)], [c*sqrt(3), d]]`. Composition, inversion and the
/// determinant act on the quadruple exactly like on a plain rational 2x2
/// matrix; only the squared-entry sum `q` carries the `sqrt(3)` weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Jacobian2 {
    a: Rational,
    b: Rational,
    c: Rational,
    d: Rational,
}

impl Jacobian2 {
    pub fn from_parts(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        Jacobian2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Jacobian2 {
            a: Rational::one(),
            b: Rational::zero(),
            c: Rational::zero(),
            d: Rational::one(),
        }
    }

    pub fn parts(&self) -> (&Rational, &Rational, &Rational, &Rational) {
        (&self.a, &self.b, &self.c, &self.d)
    }

    /// Sum of squared real entries: `a^2 + b^2/3 + 3 c^2 + d^2`. This equals
    /// `alpha_1^2 + alpha_2^2` for the singular values `alpha_1 >= alpha_2`.
    pub fn q(&self) -> Rational {
        let third = big_ratio(1, 3);
        let three = big_ratio(3, 1);
        &(&(&self.a * &self.a) + &(&(&self.b * &self.b) * &third))
            + &(&(&(&self.c * &self.c) * &three) + &(&self.d * &self.d))
    }

    pub fn det(&self) -> Rational {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn det2(&self) -> Rational {
        let det = self.det();
        &det * &det
    }

    /// `q / det^2`, the squared strong norm of the inverse map's derivative.
    pub fn q_over_det2(&self) -> Result<Rational> {
        let det2 = self.det2();
        if det2.is_zero() {
            return Err(Error::SingularDerivative);
        }
        Ok(&self.q() / &det2)
    }

    /// Chain-rule composition `self . inner` (self applied after inner).
    pub fn compose(&self, inner: &Jacobian2) -> Jacobian2 {
        Jacobian2 {
            a: &(&self.a * &inner.a) + &(&self.b * &inner.c),
            b: &(&self.a * &inner.b) + &(&self.b * &inner.d),
            c: &(&self.c * &inner.a) + &(&self.d * &inner.c),
            d: &(&self.c * &inner.b) + &(&self.d * &inner.d),
        }
    }

    pub fn inverse(&self) -> Option<Jacobian2> {
        let det = self.det();
        if det.is_zero() {
            return None;
        }
        Some(Jacobian2 {
            a: &self.d / &det,
            b: -(&self.b / &det),
            c: -(&self.c / &det),
            d: &self.a / &det,
        })
    }

    pub fn real_entries(&self) -> [f64; 4] {
        let s3 = 3f64.sqrt();
        [
            self.a.to_f64().unwrap_or(f64::NAN),
            self.b.to_f64().unwrap_or(f64::NAN) / s3,
            self.c.to_f64().unwrap_or(f64::NAN) * s3,
            self.d.to_f64().unwrap_or(f64::NAN),
        ]
    }

    /// Largest singular value, from the closed form
    /// `sqrt((q + sqrt(q^2 - 4 det^2)) / 2)`.
    pub fn largest_singular_value(&self) -> f64 {
        let q = self.q().to_f64().unwrap_or(f64::NAN);
        let det2 = self.det2().to_f64().unwrap_or(f64::NAN);
        let disc = (q * q - 4.0 * det2).max(0.0);
        ((q + disc.sqrt()) / 2.0).sqrt()
    }

    /// Exact bounds `q/2 <= alpha_1^2 <= q` for the squared largest singular
    /// value.
    pub fn singular_value_sq_bounds(&self) -> (Rational, Rational) {
        let q = self.q();
        (&q * &big_ratio(1, 2), q)
    }

    /// Exact test for `alpha_1 < 1`: equivalent to `q < 2` and
    /// `q < 1 + det^2`.
    pub fn operator_norm_lt_one(&self) -> bool {
        let q = self.q();
        let two = big_ratio(2, 1);
        let one_plus = &Rational::one() + &self.det2();
        q < two && q < one_plus
    }
}

/// Derivative of `y -> P y / sigma(P y)` at a rational point, in basis `B`.
///
/// For a tangent vector `v` the derivative is
/// `P v / sigma(P y) - sigma(P v) P y / sigma(P y)^2`; the columns of the
/// returned matrix are the `B`-coordinates of the images of the two basis
/// vectors.
pub fn jacobian(m: &Mat3, y: &SimplexPoint) -> Result<Jacobian2> {
    if !m.is_nonnegative() {
        return Err(Error::InvalidConfig(
            "jacobian requires a nonnegative matrix".into(),
        ));
    }
    let py = apply_rational(m, y.coords());
    let sigma = &(&py[0] + &py[1]) + &py[2];
    if sigma.is_zero() {
        return Err(Error::DegenerateProjection);
    }
    let sigma2 = &sigma * &sigma;

    let deriv = |pv: [Rational; 3]| -> [Rational; 3] {
        let spv = &(&pv[0] + &pv[1]) + &pv[2];
        let scale = &spv / &sigma2;
        [
            &(&pv[0] / &sigma) - &(&py[0] * &scale),
            &(&pv[1] / &sigma) - &(&py[1] * &scale),
            &(&pv[2] / &sigma) - &(&py[2] * &scale),
        ]
    };

    let u = deriv(apply_ints(m, [1, -1, 0]));
    let w = deriv(apply_ints(m, [-1, -1, 2]));
    let half = big_ratio(1, 2);

    Ok(Jacobian2 {
        a: &u[0] + &(&u[2] * &half),
        b: &w[0] + &(&w[2] * &half),
        c: &u[2] * &half,
        d: &w[2] * &half,
    })
}

/// Floating-point twin of [`Jacobian2`], stored as the real 2x2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jacobian2F {
    pub m: [[f64; 2]; 2],
}

impl Jacobian2F {
    pub fn q(&self) -> f64 {
        self.m.iter().flatten().map(|e| e * e).sum()
    }

    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn largest_singular_value(&self) -> f64 {
        let q = self.q();
        let det = self.det();
        let disc = (q * q - 4.0 * det * det).max(0.0);
        ((q + disc.sqrt()) / 2.0).sqrt()
    }
}

pub fn projective_apply_f64(m: &Mat3, y: [f64; 3]) -> [f64; 3] {
    let mut py = [0.0f64; 3];
    for (i, row) in m.0.iter().enumerate() {
        py[i] = row.iter().zip(y.iter()).map(|(&a, &x)| a as f64 * x).sum();
    }
    let sigma = py[0] + py[1] + py[2];
    [py[0] / sigma, py[1] / sigma, py[2] / sigma]
}

/// Real `B`-basis coordinates of a zero-sum vector.
pub fn basis_coords_f64(v: [f64; 3]) -> [f64; 2] {
    [v[0] + v[2] / 2.0, 3f64.sqrt() * v[2] / 2.0]
}

pub fn jacobian_f64(m: &Mat3, y: [f64; 3]) -> Jacobian2F {
    let mut py = [0.0f64; 3];
    for (i, row) in m.0.iter().enumerate() {
        py[i] = row.iter().zip(y.iter()).map(|(&a, &x)| a as f64 * x).sum();
    }
    let sigma = py[0] + py[1] + py[2];
    let deriv = |v: [f64; 3]| -> [f64; 3] {
        let mut pv = [0.0f64; 3];
        for (i, row) in m.0.iter().enumerate() {
            pv[i] = row.iter().zip(v.iter()).map(|(&a, &x)| a as f64 * x).sum();
        }
        let spv = pv[0] + pv[1] + pv[2];
        [
            pv[0] / sigma - spv * py[0] / (sigma * sigma),
            pv[1] / sigma - spv * py[1] / (sigma * sigma),
            pv[2] / sigma - spv * py[2] / (sigma * sigma),
        ]
    };
    let s3 = 3f64.sqrt();
    let u = basis_coords_f64(deriv([1.0, -1.0, 0.0]));
    let w = basis_coords_f64(deriv([-1.0 / s3, -1.0 / s3, 2.0 / s3]));
    Jacobian2F {
        m: [[u[0], w[0]], [u[1], w[1]]],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::GeneratorSet;

    fn rat(n: i64, d: i64) -> Rational {
        big_ratio(n, d)
    }

    #[test]
    fn basis_coords_of_basis_vectors() {
        let c = basis_coords(&TangentVector::basis_first());
        assert_eq!(c.alpha, Rational::one());
        assert!(c.beta_sqrt3.is_zero());

        // sqrt(3) * b2 = (-1, -1, 2) has coordinates (0, sqrt(3)), i.e.
        // beta_sqrt3 = 3.
        let c = basis_coords(&TangentVector::basis_second_scaled());
        assert!(c.alpha.is_zero());
        assert_eq!(c.beta_sqrt3, rat(3, 1));
    }

    #[test]
    fn basis_coords_solves_the_linear_system() {
        // (2, -1, -1) = 3/2 * b1 - sqrt(3)/2 * b2, so beta_sqrt3 = -3/2.
        let v = TangentVector::from_ints([2, -1, -1]).unwrap();
        let c = basis_coords(&v);
        assert_eq!(c.alpha, rat(3, 2));
        assert_eq!(c.beta_sqrt3, rat(-3, 2));
        assert_eq!(c.reconstruct(), v);
    }

    #[test]
    fn rejects_nonzero_sum() {
        assert!(TangentVector::from_ints([1, 0, 0]).is_err());
    }

    #[test]
    fn projective_apply_examples() {
        let gens = GeneratorSet::standard();
        let bary = SimplexPoint::barycenter();
        let id = Mat3::IDENTITY;
        assert_eq!(projective_apply(&id, &bary).unwrap(), bary);

        let image = projective_apply(gens.generator(1), &bary).unwrap();
        assert_eq!(
            image.coords(),
            &[rat(3, 5), rat(1, 5), rat(1, 5)],
            "M1 applied to the barycenter"
        );
        let image = projective_apply(gens.generator(2), &bary).unwrap();
        assert_eq!(image.coords(), &[rat(1, 5), rat(3, 5), rat(1, 5)]);
    }

    #[test]
    fn degenerate_projection_is_rejected() {
        let zero = Mat3([[0; 3]; 3]);
        assert!(matches!(
            projective_apply(&zero, &SimplexPoint::barycenter()),
            Err(Error::DegenerateProjection)
        ));
    }

    #[test]
    fn jacobian_of_identity_map() {
        let j = jacobian(&Mat3::IDENTITY, &SimplexPoint::barycenter()).unwrap();
        assert_eq!(j, Jacobian2::identity());
        assert_eq!(j.q(), rat(2, 1));
        assert_eq!(j.det2(), Rational::one());
    }

    #[test]
    fn jacobian_at_fixed_vertex_is_identity() {
        // e1 is the fixed point of the first branch and both basis vectors
        // are fixed by its derivative there.
        let gens = GeneratorSet::standard();
        let j = jacobian(gens.generator(1), &SimplexPoint::vertex(0)).unwrap();
        assert_eq!(j, Jacobian2::identity());
    }

    #[test]
    fn jacobian_hand_value() {
        // d/dy (M1 y / sigma) at the barycenter, entries worked out by hand:
        // columns (21/50, 3/50*sqrt(3)) and (9/50/sqrt(3), 27/50).
        let gens = GeneratorSet::standard();
        let j = jacobian(gens.generator(1), &SimplexPoint::barycenter()).unwrap();
        let (a, b, c, d) = j.parts();
        assert_eq!(a, &rat(21, 50));
        assert_eq!(b, &rat(9, 50));
        assert_eq!(c, &rat(3, 50));
        assert_eq!(d, &rat(27, 50));
        // |det| = det(P) / sigma(Py)^3 = (3/5)^-3 reciprocal: 27/125.
        assert_eq!(j.det(), rat(27, 125));
    }

    #[test]
    fn singular_value_closed_form() {
        assert!((Jacobian2::identity().largest_singular_value() - 1.0).abs() < 1e-15);
        let j = Jacobian2::from_parts(rat(3, 1), rat(0, 1), rat(0, 1), rat(1, 1));
        assert!((j.largest_singular_value() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn float_jacobian_tracks_exact() {
        let gens = GeneratorSet::standard();
        let p = gens.generator(1).mul(gens.generator(2)).unwrap();
        let y = SimplexPoint::from_weights(2, 3, 5).unwrap();
        let exact = jacobian(&p, &y).unwrap();
        let float = jacobian_f64(&p, y.to_f64());
        let re = exact.real_entries();
        for (i, row) in float.m.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                assert!((e - re[2 * i + j]).abs() < 1e-12);
            }
        }
        assert!((float.q() - exact.q().to_f64().unwrap()).abs() < 1e-12);
    }
}
