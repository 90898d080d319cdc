//! Almost-contact metric frame algebra in the ordered orthonormal basis
//! `(X1, X2, X3) = (U or e, phiU or phie, xi)`.
//!
//! The metric is the identity, `eta` reads the `xi` component, and `phi`
//! is fixed by `phi X1 = X2`, `phi X2 = -X1`, `phi xi = 0`.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::exact::Scalar;

/// A tangent vector by its three frame components.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameVector<S>(pub [S; 3]);

impl<S: Scalar> FrameVector<S> {
    pub fn new(a: S, b: S, c: S) -> Self {
        FrameVector([a, b, c])
    }

    pub fn zero() -> Self {
        FrameVector([S::zero(), S::zero(), S::zero()])
    }

    /// The `i`-th basis vector (0-based).
    pub fn basis(i: usize) -> Self {
        let mut v = Self::zero();
        v.0[i] = S::one();
        v
    }

    pub fn scale(&self, k: &S) -> Self {
        FrameVector(std::array::from_fn(|i| self.0[i].clone() * k.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    pub fn components(&self) -> &[S; 3] {
        &self.0
    }
}

impl<S: Scalar> Index<usize> for FrameVector<S> {
    type Output = S;
    fn index(&self, i: usize) -> &S {
        &self.0[i]
    }
}

impl<S: Scalar> Add for FrameVector<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let [a, b, c] = self.0;
        let [x, y, z] = rhs.0;
        FrameVector([a + x, b + y, c + z])
    }
}

impl<S: Scalar> Sub for FrameVector<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let [a, b, c] = self.0;
        let [x, y, z] = rhs.0;
        FrameVector([a - x, b - y, c - z])
    }
}

impl<S: Scalar> Neg for FrameVector<S> {
    type Output = Self;
    fn neg(self) -> Self {
        let [a, b, c] = self.0;
        FrameVector([-a, -b, -c])
    }
}

impl<S: Scalar> fmt::Display for FrameVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.0[0], self.0[1], self.0[2])
    }
}

/// `g(v, w)` in the orthonormal frame.
pub fn g_inner<S: Scalar>(v: &FrameVector<S>, w: &FrameVector<S>) -> S {
    let [a, b, c] = v.0.clone();
    let [x, y, z] = w.0.clone();
    a * x + b * y + c * z
}

/// `eta(v) = g(v, xi)`.
pub fn eta_of<S: Scalar>(v: &FrameVector<S>) -> S {
    v.0[2].clone()
}

pub fn xi<S: Scalar>() -> FrameVector<S> {
    FrameVector::basis(2)
}

pub fn phi_apply<S: Scalar>(v: &FrameVector<S>) -> FrameVector<S> {
    FrameVector([-v.0[1].clone(), v.0[0].clone(), S::zero()])
}

/// An endomorphism of the tangent space; column `j` is the image of `Xj`.
#[derive(Clone, Debug)]
pub struct FrameOperator<S> {
    cols: [[S; 3]; 3],
    symmetric: bool,
}

// the symmetry flag is bookkeeping, not part of the value
impl<S: PartialEq> PartialEq for FrameOperator<S> {
    fn eq(&self, other: &Self) -> bool {
        self.cols == other.cols
    }
}

impl<S: Scalar> FrameOperator<S> {
    /// Builds from columns without a symmetry claim.
    pub fn from_columns(cols: [[S; 3]; 3]) -> Self {
        FrameOperator { cols, symmetric: false }
    }

    /// Builds from columns and verifies the matrix equals its transpose.
    pub fn symmetric(cols: [[S; 3]; 3]) -> Result<Self, Error> {
        let op = FrameOperator { cols, symmetric: true };
        if !op.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(op)
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> S) -> Self {
        // entry (row i, column j)
        FrameOperator::from_columns(std::array::from_fn(|j| std::array::from_fn(|i| f(i, j))))
    }

    pub fn phi() -> Self {
        let z = S::zero;
        FrameOperator::from_columns([[z(), S::one(), z()], [-S::one(), z(), z()], [z(), z(), z()]])
    }

    pub fn identity() -> Self {
        FrameOperator::from_fn(|i, j| if i == j { S::one() } else { S::zero() })
    }

    /// Entry in row `i`, column `j`.
    pub fn entry(&self, i: usize, j: usize) -> &S {
        &self.cols[j][i]
    }

    pub fn column(&self, j: usize) -> FrameVector<S> {
        FrameVector(self.cols[j].clone())
    }

    pub fn is_flagged_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn is_symmetric(&self) -> bool {
        (0..3).all(|i| (0..3).all(|j| (self.entry(i, j).clone() - self.entry(j, i).clone()).is_zero()))
    }

    pub fn apply(&self, v: &FrameVector<S>) -> FrameVector<S> {
        (0..3).fold(FrameVector::zero(), |acc, j| acc + self.column(j).scale(&v.0[j]))
    }

    pub fn compose(&self, rhs: &FrameOperator<S>) -> FrameOperator<S> {
        FrameOperator::from_columns(std::array::from_fn(|j| self.apply(&rhs.column(j)).0))
    }

    pub fn sub(&self, rhs: &FrameOperator<S>) -> FrameOperator<S> {
        FrameOperator::from_fn(|i, j| self.entry(i, j).clone() - rhs.entry(i, j).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().flatten().all(Scalar::is_zero)
    }

    /// g-self-adjointness checked on all nine basis pairs.
    pub fn is_self_adjoint(&self) -> bool {
        (0..3).all(|i| {
            (0..3).all(|j| {
                let (ei, ej) = (FrameVector::basis(i), FrameVector::basis(j));
                (g_inner(&self.apply(&ei), &ej) - g_inner(&ei, &self.apply(&ej))).is_zero()
            })
        })
    }
}

impl<S: Scalar> Mul for &FrameOperator<S> {
    type Output = FrameOperator<S>;
    fn mul(self, rhs: &FrameOperator<S>) -> FrameOperator<S> {
        self.compose(rhs)
    }
}

/// Shape data at one point.
#[derive(Clone, Debug, PartialEq)]
pub enum Shape<S> {
    /// `A e = lambda e`, `A phi e = nu phi e`, `A xi = alpha xi`.
    Hopf { alpha: S, lambda: S, nu: S },
    /// `A xi = alpha xi + beta U`, `A U = gamma U + delta phiU + beta xi`,
    /// `A phiU = delta U + mu phiU`.
    NonHopf {
        alpha: S,
        beta: S,
        gamma: S,
        delta: S,
        mu: S,
    },
}

/// One point of a real hypersurface: the ambient constant `c` and the
/// shape data in the adapted frame.
#[derive(Clone, Debug, PartialEq)]
pub struct PointData<S> {
    c: S,
    shape: Shape<S>,
}

impl<S: Scalar> PointData<S> {
    pub fn new(c: S, shape: Shape<S>) -> Result<Self, Error> {
        if c.is_zero() {
            return Err(Error::FlatAmbient);
        }
        if let Shape::NonHopf { beta, .. } = &shape {
            if beta.is_zero() {
                return Err(Error::ZeroBeta);
            }
        }
        let p = PointData { c, shape };
        let a = p.shape_operator()?;
        let found = eta_of(&a.apply(&xi()));
        if !(found.clone() - p.alpha().clone()).is_zero() {
            return Err(Error::AlphaMismatch {
                alpha: p.alpha().to_string(),
                found: found.to_string(),
            });
        }
        Ok(p)
    }

    pub fn hopf(c: S, alpha: S, lambda: S, nu: S) -> Result<Self, Error> {
        PointData::new(c, Shape::Hopf { alpha, lambda, nu })
    }

    pub fn nonhopf(c: S, alpha: S, beta: S, gamma: S, delta: S, mu: S) -> Result<Self, Error> {
        PointData::new(
            c,
            Shape::NonHopf {
                alpha,
                beta,
                gamma,
                delta,
                mu,
            },
        )
    }

    pub fn c(&self) -> &S {
        &self.c
    }

    pub fn shape(&self) -> &Shape<S> {
        &self.shape
    }

    pub fn alpha(&self) -> &S {
        match &self.shape {
            Shape::Hopf { alpha, .. } | Shape::NonHopf { alpha, .. } => alpha,
        }
    }

    pub fn is_hopf(&self) -> bool {
        matches!(self.shape, Shape::Hopf { .. })
    }

    /// The shape operator `A` in the adapted frame.
    pub fn shape_operator(&self) -> Result<FrameOperator<S>, Error> {
        shape_from_spec(&self.shape)
    }

    /// The same point seen in the frame `(phi e, -e, xi)`, which swaps
    /// `lambda` and `nu`.
    pub fn swapped(&self) -> Option<Self> {
        match &self.shape {
            Shape::Hopf { alpha, lambda, nu } => Some(PointData {
                c: self.c.clone(),
                shape: Shape::Hopf {
                    alpha: alpha.clone(),
                    lambda: nu.clone(),
                    nu: lambda.clone(),
                },
            }),
            Shape::NonHopf { .. } => None,
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> Result<T, Error>) -> Result<PointData<T>, Error> {
        let shape = match &self.shape {
            Shape::Hopf { alpha, lambda, nu } => Shape::Hopf {
                alpha: f(alpha)?,
                lambda: f(lambda)?,
                nu: f(nu)?,
            },
            Shape::NonHopf {
                alpha,
                beta,
                gamma,
                delta,
                mu,
            } => Shape::NonHopf {
                alpha: f(alpha)?,
                beta: f(beta)?,
                gamma: f(gamma)?,
                delta: f(delta)?,
                mu: f(mu)?,
            },
        };
        PointData::new(f(&self.c)?, shape)
    }
}

pub fn shape_from_spec<S: Scalar>(shape: &Shape<S>) -> Result<FrameOperator<S>, Error> {
    let z = S::zero;
    match shape.clone() {
        Shape::Hopf { alpha, lambda, nu } => {
            FrameOperator::symmetric([[lambda, z(), z()], [z(), nu, z()], [z(), z(), alpha]])
        }
        Shape::NonHopf {
            alpha,
            beta,
            gamma,
            delta,
            mu,
        } => FrameOperator::symmetric([
            [gamma, delta.clone(), beta.clone()],
            [delta, mu, z()],
            [beta, z(), alpha],
        ]),
    }
}

/// `A phi - phi A == 0`.
pub fn commutes_with_phi<S: Scalar>(a: &FrameOperator<S>) -> bool {
    let phi = FrameOperator::<S>::phi();
    (a * &phi).sub(&(&phi * a)).is_zero()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub passed: bool,
}

/// Checks the almost-contact identities and the symmetry of `A`.
pub fn contact_identity_suite<S: Scalar>(p: &PointData<S>) -> Vec<IdentityCheck> {
    let basis: Vec<FrameVector<S>> = (0..3).map(FrameVector::basis).collect();
    let phi_sq = basis.iter().all(|v| {
        let lhs = phi_apply(&phi_apply(v));
        let rhs = -v.clone() + xi::<S>().scale(&eta_of(v));
        (lhs - rhs).is_zero()
    });
    let eta_phi = basis.iter().all(|v| eta_of(&phi_apply(v)).is_zero());
    let phi_xi = phi_apply(&xi::<S>()).is_zero();
    let eta_xi = (eta_of(&xi::<S>()) - S::one()).is_zero();
    let mut metric = true;
    let mut skew = true;
    for x in &basis {
        for y in &basis {
            let lhs = g_inner(&phi_apply(x), &phi_apply(y));
            let rhs = g_inner(x, y) - eta_of(x) * eta_of(y);
            metric &= (lhs - rhs).is_zero();
            skew &= (g_inner(x, &phi_apply(y)) + g_inner(&phi_apply(x), y)).is_zero();
        }
    }
    let a_sym = p.shape_operator().map(|a| a.is_self_adjoint()).unwrap_or(false);
    vec![
        IdentityCheck {
            name: "phi^2 = -id + eta (x) xi",
            passed: phi_sq,
        },
        IdentityCheck {
            name: "eta o phi = 0",
            passed: eta_phi,
        },
        IdentityCheck {
            name: "phi xi = 0",
            passed: phi_xi,
        },
        IdentityCheck {
            name: "eta(xi) = 1",
            passed: eta_xi,
        },
        IdentityCheck {
            name: "g(phi X, phi Y) = g(X,Y) - eta(X) eta(Y)",
            passed: metric,
        },
        IdentityCheck {
            name: "g(X, phi Y) = -g(phi X, Y)",
            passed: skew,
        },
        IdentityCheck {
            name: "A self-adjoint",
            passed: a_sym,
        },
    ]
}

// ---------------------------------------------------------------------------
// JSON

/// A scalar as it appears in JSON: exact text or a float.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ScalarJson {
    Text(String),
    Number(f64),
}

impl ScalarJson {
    pub fn to_scalar<S: Scalar>(&self) -> Result<S, Error> {
        match self {
            ScalarJson::Text(t) => S::parse(t),
            // decimal text parses exactly in the exact rings
            ScalarJson::Number(x) => S::parse(&x.to_string()),
        }
    }

    pub fn from_scalar<S: Scalar>(s: &S) -> ScalarJson {
        match s.to_json() {
            serde_json::Value::Number(n) => ScalarJson::Number(n.as_f64().unwrap_or(f64::NAN)),
            serde_json::Value::String(t) => ScalarJson::Text(t),
            other => ScalarJson::Text(other.to_string()),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ShapeJson {
    Hopf {
        alpha: ScalarJson,
        lambda: ScalarJson,
        nu: ScalarJson,
    },
    Nonhopf {
        alpha: ScalarJson,
        beta: ScalarJson,
        gamma: ScalarJson,
        delta: ScalarJson,
        mu: ScalarJson,
    },
}

/// Wire form of [`PointData`]:
/// `{"c": scalar, "shape": {"kind": "hopf"|"nonhopf", ...}}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PointJson {
    pub c: ScalarJson,
    pub shape: ShapeJson,
}

impl<S: Scalar> PointData<S> {
    pub fn to_json_repr(&self) -> PointJson {
        let j = ScalarJson::from_scalar::<S>;
        let shape = match &self.shape {
            Shape::Hopf { alpha, lambda, nu } => ShapeJson::Hopf {
                alpha: j(alpha),
                lambda: j(lambda),
                nu: j(nu),
            },
            Shape::NonHopf {
                alpha,
                beta,
                gamma,
                delta,
                mu,
            } => ShapeJson::Nonhopf {
                alpha: j(alpha),
                beta: j(beta),
                gamma: j(gamma),
                delta: j(delta),
                mu: j(mu),
            },
        };
        PointJson { c: j(&self.c), shape }
    }

    pub fn from_json_repr(r: &PointJson) -> Result<Self, Error> {
        let shape = match &r.shape {
            ShapeJson::Hopf { alpha, lambda, nu } => Shape::Hopf {
                alpha: alpha.to_scalar()?,
                lambda: lambda.to_scalar()?,
                nu: nu.to_scalar()?,
            },
            ShapeJson::Nonhopf {
                alpha,
                beta,
                gamma,
                delta,
                mu,
            } => Shape::NonHopf {
                alpha: alpha.to_scalar()?,
                beta: beta.to_scalar()?,
                gamma: gamma.to_scalar()?,
                delta: delta.to_scalar()?,
                mu: mu.to_scalar()?,
            },
        };
        PointData::new(r.c.to_scalar()?, shape)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json_repr()).expect("point data serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self, Error> {
        let r: PointJson = serde_json::from_str(text).map_err(|e| Error::InvalidPoint(e.to_string()))?;
        Self::from_json_repr(&r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_expr, q, BigRational, RatFunc};

    type Q = BigRational;

    fn r(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    fn e(s: &str) -> RatFunc {
        parse_expr(s).unwrap()
    }

    #[test]
    fn phi_on_basis() {
        let x1 = FrameVector::<Q>::basis(0);
        let x2 = FrameVector::<Q>::basis(1);
        let x3 = FrameVector::<Q>::basis(2);
        assert_eq!(phi_apply(&x1), x2);
        assert_eq!(phi_apply(&x2), -x1.clone());
        assert!(phi_apply(&x3).is_zero());
    }

    #[test]
    fn metric_and_eta() {
        let x1 = FrameVector::<Q>::basis(0);
        let x2 = FrameVector::<Q>::basis(1);
        let x3 = FrameVector::<Q>::basis(2);
        assert_eq!(g_inner(&x1, &x1), r(1));
        assert_eq!(g_inner(&x1, &x2), r(0));
        assert_eq!(g_inner(&phi_apply(&x1), &phi_apply(&x1)), r(1));
        assert_eq!(eta_of(&x3), r(1));
        assert_eq!(g_inner(&x1, &phi_apply(&x2)), r(-1));
        assert_eq!(-g_inner(&phi_apply(&x1), &x2), r(-1));
    }

    #[test]
    fn hopf_shape_is_diagonal() {
        let p = PointData::hopf(r(-4), r(2), r(1), r(1)).unwrap();
        let a = p.shape_operator().unwrap();
        assert_eq!(
            a,
            FrameOperator::from_fn(|i, j| if i != j { r(0) } else { [r(1), r(1), r(2)][i].clone() })
        );
        assert!(a.is_flagged_symmetric());
    }

    #[test]
    fn nonhopf_shape_matches_adapted_frame() {
        let p = PointData::nonhopf(e("c"), e("alpha"), e("beta"), e("gamma"), e("delta"), e("mu")).unwrap();
        let a = p.shape_operator().unwrap();
        assert_eq!(a.column(0), FrameVector::new(e("gamma"), e("delta"), e("beta")));
        assert_eq!(a.column(1), FrameVector::new(e("delta"), e("mu"), e("0")));
        assert_eq!(a.column(2), FrameVector::new(e("beta"), e("0"), e("alpha")));
        assert!(a.is_self_adjoint());
        assert_eq!(eta_of(&a.apply(&xi())), e("alpha"));
    }

    #[test]
    fn alpha_zero_tube_data() {
        let p = PointData::hopf(e("c"), e("0"), e("s"), e("c/(4*s)")).unwrap();
        let a = p.shape_operator().unwrap();
        assert_eq!(a.entry(1, 1), &e("c/(4*s)"));
        assert!(a.entry(2, 2).is_zero());
    }

    #[test]
    fn invalid_points_rejected() {
        assert_eq!(PointData::hopf(r(0), r(1), r(1), r(1)), Err(Error::FlatAmbient));
        assert_eq!(
            PointData::nonhopf(r(4), r(1), r(0), r(1), r(0), r(1)),
            Err(Error::ZeroBeta)
        );
        assert_eq!(
            FrameOperator::symmetric([[r(1), r(2), r(0)], [r(0), r(1), r(0)], [r(0), r(0), r(1)]]),
            Err(Error::NotSymmetric)
        );
    }

    #[test]
    fn commutation_with_phi() {
        let umbilic = PointData::hopf(r(4), r(3), r(2), r(2)).unwrap();
        assert!(commutes_with_phi(&umbilic.shape_operator().unwrap()));
        let split = PointData::hopf(r(4), r(3), r(2), r(5)).unwrap();
        assert!(!commutes_with_phi(&split.shape_operator().unwrap()));
        let nh = PointData::nonhopf(r(4), r(1), r(1), r(2), r(0), r(3)).unwrap();
        assert!(!commutes_with_phi(&nh.shape_operator().unwrap()));
    }

    #[test]
    fn identity_suite_passes_and_survives_swap() {
        let p = PointData::hopf(e("c"), e("alpha"), e("lambda"), e("nu")).unwrap();
        let suite = contact_identity_suite(&p);
        assert!(suite.iter().all(|c| c.passed), "{:?}", suite);
        assert_eq!(suite, contact_identity_suite(&p.swapped().unwrap()));
        let nh = PointData::nonhopf(r(-4), q(1, 2), r(3), r(1), r(2), r(5)).unwrap();
        assert!(contact_identity_suite(&nh).iter().all(|c| c.passed));
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let p = PointData::hopf(e("4"), e("(t^2 - 1)/t"), e("t"), e("t")).unwrap();
        let text = p.to_json_string();
        assert_eq!(
            text,
            r#"{"c":"4","shape":{"kind":"hopf","alpha":"(t^2 - 1)/t","lambda":"t","nu":"t"}}"#
        );
        let back = PointData::<RatFunc>::from_json_str(&text).unwrap();
        assert_eq!(back.to_json_string(), text);
    }

    #[test]
    fn json_errors() {
        assert!(matches!(
            PointData::<Q>::from_json_str(r#"{"c":"0","shape":{"kind":"hopf","alpha":"1","lambda":"1","nu":"1"}}"#),
            Err(Error::FlatAmbient)
        ));
        assert!(matches!(
            PointData::<Q>::from_json_str("{not json"),
            Err(Error::InvalidPoint(_))
        ));
        assert!(PointData::<Q>::from_json_str(
            r#"{"c":"4","shape":{"kind":"hopf","alpha":"x","lambda":"1","nu":"1"}}"#
        )
        .is_err());
    }
}
