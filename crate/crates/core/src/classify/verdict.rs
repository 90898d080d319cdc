//! Mapping an admissible set onto the pseudo-parallel classification.

use std::fmt;

use super::admissible::{admissible_l, AdmissibleSet};
use crate::curvature::CurvatureModel;
use crate::error::Error;
use crate::exact::{Assumptions, Scalar};
use crate::frame::{commutes_with_phi, PointData};

#[derive(Clone, Debug, PartialEq)]
pub enum Classification<S> {
    ProperPseudoParallel {
        l: S,
    },
    SemiParallelOnly,
    /// Every `L` is admissible, `l = 0` included.
    Degenerate,
    NotPseudoParallel,
}

impl<S> Classification<S> {
    pub fn name(&self) -> &'static str {
        match self {
            Classification::ProperPseudoParallel { .. } => "proper_pseudo_parallel",
            Classification::SemiParallelOnly => "semi_parallel_only",
            Classification::Degenerate => "degenerate",
            Classification::NotPseudoParallel => "not_pseudo_parallel",
        }
    }
}

impl<S> fmt::Display for Classification<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict<S> {
    pub class: Classification<S>,
    pub hopf: bool,
    pub jacobi_zero: bool,
    pub commutes: bool,
    pub admissible: AdmissibleSet<S>,
}

impl<S: Scalar> Verdict<S> {
    pub fn l_value(&self) -> Option<&S> {
        match &self.class {
            Classification::ProperPseudoParallel { l } => Some(l),
            _ => None,
        }
    }

    pub fn is_pseudo_parallel(&self) -> bool {
        matches!(
            self.class,
            Classification::ProperPseudoParallel { .. } | Classification::SemiParallelOnly
        )
    }
}

/// `c != 0` always, `beta != 0` off the Hopf locus.
pub fn standing_assumptions<S: Scalar>(p: &PointData<S>) -> Assumptions {
    let mut asm = Assumptions::new();
    if let Some(c) = p.c().to_ratfunc() {
        asm.add(&c);
    }
    if let crate::frame::Shape::NonHopf { beta, .. } = p.shape() {
        if let Some(b) = beta.to_ratfunc() {
            asm.add(&b);
        }
    }
    asm
}

pub fn classify_set<S: Scalar>(set: &AdmissibleSet<S>, jacobi_zero: bool) -> Classification<S> {
    if jacobi_zero {
        return Classification::Degenerate;
    }
    match set {
        AdmissibleSet::All => Classification::Degenerate,
        AdmissibleSet::Empty { .. } => Classification::NotPseudoParallel,
        // Outstanding requirements are nonzero at a generic point of the data.
        AdmissibleSet::Single { requirements, .. } if !requirements.is_empty() => Classification::NotPseudoParallel,
        AdmissibleSet::Single { value, .. } if value.is_zero() => Classification::SemiParallelOnly,
        AdmissibleSet::Single { value, .. } => Classification::ProperPseudoParallel { l: value.clone() },
    }
}

pub fn verdict<S: Scalar>(p: &PointData<S>) -> Result<Verdict<S>, Error> {
    verdict_with(p, &Assumptions::new())
}

/// Verdict with extra nonvanishing assumptions on top of the standing ones.
pub fn verdict_with<S: Scalar>(p: &PointData<S>, extra: &Assumptions) -> Result<Verdict<S>, Error> {
    let model = CurvatureModel::from_point(p)?;
    let mut asm = standing_assumptions(p);
    asm.extend(extra);
    let jacobi_zero = model.jacobi_l().is_zero();
    let admissible = admissible_l(&model.defect_affine(), &asm);
    Ok(Verdict {
        class: classify_set(&admissible, jacobi_zero),
        hopf: p.is_hopf(),
        jacobi_zero,
        commutes: commutes_with_phi(model.shape_operator()),
        admissible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::catalog::{catalog, Model, Space};
    use crate::exact::{parse_expr, q, BigRational, Float, RatFunc};

    fn e(s: &str) -> RatFunc {
        parse_expr(s).unwrap()
    }

    #[test]
    fn tube_over_ch1_at_half() {
        let p = catalog(Space::CH2, Model::TubeHyperplane, Some(&q(1, 2))).unwrap();
        let v = verdict(&p).unwrap();
        assert_eq!(v.class, Classification::ProperPseudoParallel { l: q(1, 4) });
        assert!(v.hopf && v.commutes && !v.jacobi_zero);
    }

    #[test]
    fn generic_nonhopf_with_delta_is_not_pseudo_parallel() {
        let p = PointData::nonhopf(e("c"), e("alpha"), e("beta"), e("gamma"), e("delta"), e("mu")).unwrap();
        let v = verdict_with(&p, &Assumptions::parse(&["alpha", "delta"]).unwrap()).unwrap();
        assert_eq!(v.class, Classification::NotPseudoParallel);
        assert!(!v.hopf && !v.commutes);
    }

    #[test]
    fn isolated_hopf_instance_is_pointwise_proper() {
        let p = PointData::hopf(q(-16 * 49, 7), q(7, 1), q(4, 1), q(-28, 1)).unwrap();
        let v = verdict(&p).unwrap();
        assert_eq!(v.class, Classification::ProperPseudoParallel { l: q(-32 * 49, 7) });

        let p = PointData::hopf(e("-16*alpha^2/7"), e("alpha"), e("4*alpha/7"), e("-4*alpha")).unwrap();
        let v = verdict_with(&p, &Assumptions::parse(&["alpha"]).unwrap()).unwrap();
        assert_eq!(v.l_value(), Some(&e("-32*alpha^2/7")));
    }

    #[test]
    fn l_zero_is_degenerate() {
        let p = PointData::nonhopf(q(4, 1), q(2, 1), q(1, 1), q(0, 1), q(0, 1), q(-1, 2)).unwrap();
        let v = verdict(&p).unwrap();
        assert!(v.jacobi_zero);
        assert_eq!(v.class, Classification::Degenerate);
    }

    #[test]
    fn zero_l_value_is_semi_parallel() {
        let set = AdmissibleSet::Single {
            value: q(0, 1),
            conditions: vec![],
            requirements: vec![],
            residual: None,
        };
        assert_eq!(classify_set(&set, false), Classification::SemiParallelOnly);
        assert_eq!(classify_set(&set, true), Classification::Degenerate);
        assert_eq!(
            classify_set(&AdmissibleSet::<BigRational>::All, false),
            Classification::Degenerate
        );
    }

    #[test]
    fn float_verdict() {
        let f = Float::new;
        let p = catalog(Space::CP2, Model::GeodesicSphere, Some(&f(2.0))).unwrap();
        let v = verdict(&p).unwrap();
        assert!((v.l_value().unwrap().value() - 4.0).abs() < 1e-9);
    }
}
