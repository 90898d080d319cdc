//! Model hypersurfaces in CP² (c = 4) and CH² (c = -4).

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::Error;
use crate::exact::{parse_expr, RatFunc, Scalar, Symbol};
use crate::frame::PointData;

/// `lambda nu - (alpha/2)(lambda + nu) - c/4`.
pub fn hopf_check<S: Scalar>(alpha: &S, lambda: &S, nu: &S, c: &S) -> S {
    let half = S::from_ratio(1, 2);
    let quarter = S::from_ratio(1, 4);
    lambda.clone() * nu.clone() - half * alpha.clone() * (lambda.clone() + nu.clone()) - quarter * c.clone()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    CP2,
    CH2,
}

impl Space {
    pub const ALL: [Space; 2] = [Space::CP2, Space::CH2];

    pub fn name(self) -> &'static str {
        match self {
            Space::CP2 => "cp2",
            Space::CH2 => "ch2",
        }
    }

    pub fn c(self) -> i64 {
        match self {
            Space::CP2 => 4,
            Space::CH2 => -4,
        }
    }

    pub fn models(self) -> &'static [Model] {
        match self {
            Space::CP2 => &[Model::GeodesicSphere, Model::TubeCurve],
            Space::CH2 => &[
                Model::GeodesicSphere,
                Model::Horosphere,
                Model::TubeHyperplane,
                Model::AlphaZero,
            ],
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Space {
    type Err = Error;

    fn from_str(s: &str) -> Result<Space, Error> {
        Space::ALL
            .into_iter()
            .find(|sp| sp.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownChoice {
                kind: "space",
                given: s.to_string(),
                valid: names(Space::ALL.iter().map(|s| s.name())),
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    GeodesicSphere,
    Horosphere,
    TubeHyperplane,
    TubeCurve,
    /// Hopf with `alpha = 0` in CH².
    AlphaZero,
}

impl Model {
    pub const ALL: [Model; 5] = [
        Model::GeodesicSphere,
        Model::Horosphere,
        Model::TubeHyperplane,
        Model::TubeCurve,
        Model::AlphaZero,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Model::GeodesicSphere => "geodesic_sphere",
            Model::Horosphere => "horosphere",
            Model::TubeHyperplane => "tube_hyperplane",
            Model::TubeCurve => "tube_curve",
            Model::AlphaZero => "alpha_zero",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Model, Error> {
        Model::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownChoice {
                kind: "model",
                given: s.to_string(),
                valid: names(Model::ALL.iter().map(|m| m.name())),
            })
    }
}

fn names<'a>(it: impl Iterator<Item = &'a str>) -> String {
    it.collect::<Vec<_>>().join(", ")
}

/// How a family's parameter relates to the radius, and where it lives.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Range {
    Positive,
    AboveOne,
    UnitInterval,
    Nonzero,
    None,
}

impl Range {
    fn describe(self) -> &'static str {
        match self {
            Range::Positive => "t > 0",
            Range::AboveOne => "u > 1",
            Range::UnitInterval => "0 < t < 1",
            Range::Nonzero => "s != 0",
            Range::None => "no parameter",
        }
    }

    fn contains_exact(self, x: &BigRational) -> bool {
        let one = <BigRational as One>::one();
        match self {
            Range::Positive => x.is_positive(),
            Range::AboveOne => x > &one,
            Range::UnitInterval => x.is_positive() && x < &one,
            Range::Nonzero => x.is_positive() || x.is_negative(),
            Range::None => true,
        }
    }

    fn contains_f64(self, x: f64) -> bool {
        match self {
            Range::Positive => x > 0.0,
            Range::AboveOne => x > 1.0,
            Range::UnitInterval => x > 0.0 && x < 1.0,
            Range::Nonzero => x != 0.0,
            Range::None => true,
        }
    }
}

/// One entry of the classification list, with its symbolic parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Family {
    pub name: &'static str,
    pub space: Space,
    pub model: Model,
    /// Parameter symbol name, `None` for the horosphere.
    pub param: Option<&'static str>,
    /// The admissible `L` the family must produce, in the parameter.
    pub expected_l: &'static str,
}

pub const FAMILIES: [Family; 6] = [
    Family {
        name: "cp2_geodesic_sphere",
        space: Space::CP2,
        model: Model::GeodesicSphere,
        param: Some("t"),
        expected_l: "t^2",
    },
    Family {
        name: "cp2_tube_curve",
        space: Space::CP2,
        model: Model::TubeCurve,
        param: Some("s"),
        expected_l: "1",
    },
    Family {
        name: "ch2_horosphere",
        space: Space::CH2,
        model: Model::Horosphere,
        param: None,
        expected_l: "1",
    },
    Family {
        name: "ch2_geodesic_sphere",
        space: Space::CH2,
        model: Model::GeodesicSphere,
        param: Some("u"),
        expected_l: "u^2",
    },
    Family {
        name: "ch2_tube_hyperplane",
        space: Space::CH2,
        model: Model::TubeHyperplane,
        param: Some("t"),
        expected_l: "t^2",
    },
    Family {
        name: "ch2_alpha_zero",
        space: Space::CH2,
        model: Model::AlphaZero,
        param: Some("s"),
        expected_l: "-1",
    },
];

impl Family {
    pub fn lookup(space: Space, model: Model) -> Option<&'static Family> {
        FAMILIES.iter().find(|f| f.space == space && f.model == model)
    }

    fn range(&self) -> Range {
        match (self.space, self.model) {
            (Space::CP2, Model::GeodesicSphere) => Range::Positive,
            (Space::CH2, Model::GeodesicSphere) => Range::AboveOne,
            (_, Model::TubeHyperplane) => Range::UnitInterval,
            (_, Model::TubeCurve) | (_, Model::AlphaZero) => Range::Nonzero,
            (_, Model::Horosphere) => Range::None,
        }
    }

    pub fn range_text(&self) -> &'static str {
        self.range().describe()
    }

    /// `(alpha, lambda, nu)` as expressions in the parameter `x`.
    fn curvatures<S: Scalar>(&self, x: &S) -> Result<(S, S, S), Error> {
        let one = S::one();
        Ok(match (self.space, self.model) {
            (Space::CP2, Model::GeodesicSphere) => {
                ((x.clone() * x.clone() - one).checked_div(x)?, x.clone(), x.clone())
            }
            (Space::CH2, Model::GeodesicSphere) | (Space::CH2, Model::TubeHyperplane) => {
                ((x.clone() * x.clone() + one).checked_div(x)?, x.clone(), x.clone())
            }
            (Space::CP2, Model::TubeCurve) => (S::zero(), x.clone(), one.checked_div(x)?),
            (Space::CH2, Model::AlphaZero) => (S::zero(), x.clone(), -one.checked_div(x)?),
            (Space::CH2, Model::Horosphere) => (S::from_ratio(2, 1), one.clone(), one),
            _ => unreachable!("family table only lists valid pairs"),
        })
    }

    /// The family's point with the parameter left symbolic.
    pub fn symbolic_point(&self) -> PointData<RatFunc> {
        let x = match self.param {
            Some(name) => RatFunc::var(Symbol::named(name).expect("family parameters are in the alphabet")),
            None => RatFunc::int(0),
        };
        self.point(&x).expect("symbolic parameters satisfy every range")
    }

    pub fn symbolic_expected_l(&self) -> RatFunc {
        parse_expr(self.expected_l).expect("expected values parse")
    }

    /// Expected `L` at a concrete parameter value.
    pub fn expected_l_at<S: Scalar>(&self, x: &S) -> S {
        match self.expected_l {
            "t^2" | "u^2" => x.clone() * x.clone(),
            other => {
                S::from_ratfunc(&parse_expr(other).expect("expected values parse")).expect("constant expected value")
            }
        }
    }

    /// Point at parameter `x`, range-checked when `x` is a number.
    pub fn point<S: Scalar>(&self, x: &S) -> Result<PointData<S>, Error> {
        let range = self.range();
        let in_range = match x.to_ratfunc() {
            Some(r) => r.as_constant().map(|v| range.contains_exact(&v)),
            None => x.to_f64().map(|v| range.contains_f64(v)),
        };
        if in_range == Some(false) {
            return Err(Error::ParamOutOfRange {
                model: format!("{} {}", self.space, self.model),
                param: x.to_string(),
                range: range.describe().to_string(),
            });
        }
        let (alpha, lambda, nu) = self.curvatures(x)?;
        PointData::hopf(S::from_ratio(self.space.c(), 1), alpha, lambda, nu)
    }

    /// Maps a radius to the family parameter: `cot r`, `coth r`, `tanh r`.
    /// Families parametrized directly by `s` take `s = r`.
    pub fn param_from_radius(&self, r: f64) -> f64 {
        match (self.space, self.model) {
            (Space::CP2, Model::GeodesicSphere) => 1.0 / r.tan(),
            (Space::CH2, Model::GeodesicSphere) => 1.0 / r.tanh(),
            (Space::CH2, Model::TubeHyperplane) => r.tanh(),
            _ => r,
        }
    }
}

/// Catalog lookup. `param` may be omitted only for the horosphere.
pub fn catalog<S: Scalar>(space: Space, model: Model, param: Option<&S>) -> Result<PointData<S>, Error> {
    let family = Family::lookup(space, model).ok_or_else(|| Error::UnknownChoice {
        kind: "model",
        given: format!("{} for {}", model, space),
        valid: names(space.models().iter().map(|m| m.name())),
    })?;
    match (family.param, param) {
        (None, _) => family.point(&S::zero()),
        (Some(_), Some(x)) => family.point(x),
        (Some(_), None) => Err(Error::ParamOutOfRange {
            model: format!("{} {}", space, model),
            param: "missing".into(),
            range: family.range_text().to_string(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use crate::frame::{commutes_with_phi, Shape};

    #[test]
    fn hopf_check_examples() {
        let e = |s: &str| parse_expr(s).unwrap();
        assert!(hopf_check(&e("alpha"), &e("4*alpha/7"), &e("-4*alpha"), &e("-16*alpha^2/7")).is_zero());
        assert!(hopf_check(&e("0"), &e("s"), &e("c/(4*s)"), &e("c")).is_zero());
        assert!(Scalar::is_zero(&hopf_check(&q(2, 1), &q(1, 1), &q(1, 1), &q(-4, 1))));
        assert!(!Scalar::is_zero(&hopf_check(&q(2, 1), &q(1, 1), &q(1, 1), &q(4, 1))));
    }

    #[test]
    fn every_family_satisfies_hopf_check_symbolically() {
        for f in FAMILIES {
            let p = f.symbolic_point();
            let Shape::Hopf { alpha, lambda, nu } = p.shape() else {
                panic!("catalog points are Hopf");
            };
            assert!(hopf_check(alpha, lambda, nu, p.c()).is_zero(), "{}", f.name);
            let commutes = commutes_with_phi(&p.shape_operator().unwrap());
            assert_eq!(commutes, lambda == nu, "{}", f.name);
        }
    }

    #[test]
    fn catalog_examples() {
        let p = catalog(Space::CP2, Model::GeodesicSphere, Some(&q(1, 1))).unwrap();
        assert_eq!(p, PointData::hopf(q(4, 1), q(0, 1), q(1, 1), q(1, 1)).unwrap());

        let p = catalog::<BigRational>(Space::CH2, Model::Horosphere, None).unwrap();
        assert_eq!(
            p.to_json_string(),
            r#"{"c":"-4","shape":{"kind":"hopf","alpha":"2","lambda":"1","nu":"1"}}"#
        );

        let p = catalog(Space::CP2, Model::TubeCurve, Some(&q(2, 1))).unwrap();
        assert_eq!(p, PointData::hopf(q(4, 1), q(0, 1), q(2, 1), q(1, 2)).unwrap());
    }

    #[test]
    fn range_errors_name_the_interval() {
        let err = catalog(Space::CH2, Model::GeodesicSphere, Some(&q(1, 1))).unwrap_err();
        assert!(err.to_string().contains("u > 1"), "{}", err);
        let err = catalog(Space::CH2, Model::TubeHyperplane, Some(&q(3, 2))).unwrap_err();
        assert!(err.to_string().contains("0 < t < 1"), "{}", err);
        let err = catalog(Space::CP2, Model::TubeCurve, Some(&q(0, 1))).unwrap_err();
        assert!(err.to_string().contains("s != 0"), "{}", err);
        let err = catalog::<BigRational>(Space::CP2, Model::GeodesicSphere, None).unwrap_err();
        assert!(err.to_string().contains("t > 0"), "{}", err);
        let err = catalog::<BigRational>(Space::CP2, Model::Horosphere, None).unwrap_err();
        assert!(err.to_string().contains("geodesic_sphere, tube_curve"), "{}", err);
    }

    #[test]
    fn parses_names() {
        assert_eq!("CH2".parse::<Space>().unwrap(), Space::CH2);
        assert_eq!("tube_hyperplane".parse::<Model>().unwrap(), Model::TubeHyperplane);
        let err = "cone".parse::<Model>().unwrap_err();
        assert!(err.to_string().contains("horosphere"));
    }
}
