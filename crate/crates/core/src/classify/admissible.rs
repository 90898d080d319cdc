//! Solving the affine defect `s - L t = 0` for the admissible values of `L`.

use crate::curvature::{AffineDefect, DefectIndex};
use crate::exact::{factor_match, Assumptions, RatFunc, Scalar, FLOAT_ZERO_EPS};

/// Something that has to vanish for the defect to be solvable.
#[derive(Clone, Debug, PartialEq)]
pub struct Obstruction<S> {
    /// Entry that produced it.
    pub index: DefectIndex,
    /// For a disagreement, the entry whose value of `L` was contradicted.
    pub against: Option<DefectIndex>,
    /// The quantity that must vanish.
    pub expr: S,
    /// `expr` with assumed-nonzero factors removed, made monic (exact rings).
    pub reduced: Option<RatFunc>,
    /// True when `expr = 0` contradicts the assumptions outright.
    pub decisive: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum AdmissibleSet<S> {
    /// Every `L` works: `s` and `t` vanish identically.
    All,
    /// No `L` works. `requirements` lists every other obstruction found.
    Empty {
        witness: Obstruction<S>,
        requirements: Vec<Obstruction<S>>,
    },
    /// Exactly one value. `conditions` are the divisors that must not
    /// vanish; `requirements` are undecided relations the point would also
    /// have to satisfy (empty for a genuine solution); `residual` is the
    /// largest `|s - L t|` in the float ring.
    Single {
        value: S,
        conditions: Vec<S>,
        requirements: Vec<Obstruction<S>>,
        residual: Option<f64>,
    },
}

impl<S: Scalar> AdmissibleSet<S> {
    pub fn is_empty(&self) -> bool {
        matches!(self, AdmissibleSet::Empty { .. })
    }

    pub fn value(&self) -> Option<&S> {
        match self {
            AdmissibleSet::Single { value, .. } => Some(value),
            _ => None,
        }
    }

    /// A `Single` with no outstanding requirements.
    pub fn is_unconditional_single(&self) -> bool {
        matches!(self, AdmissibleSet::Single { requirements, .. } if requirements.is_empty())
    }

    pub fn requirements(&self) -> &[Obstruction<S>] {
        match self {
            AdmissibleSet::All => &[],
            AdmissibleSet::Empty { requirements, .. } => requirements,
            AdmissibleSet::Single { requirements, .. } => requirements,
        }
    }

    /// Short human-readable form: `L = 1/4`, `EMPTY`, `ALL (degenerate)`.
    pub fn summary(&self) -> String {
        match self {
            AdmissibleSet::All => "ALL (degenerate)".to_string(),
            AdmissibleSet::Empty { .. } => "EMPTY".to_string(),
            AdmissibleSet::Single { value, .. } => format!("L = {}", value),
        }
    }
}

/// Admissible set of `L` over all 81 entries, under the given assumptions.
pub fn admissible_l<S: Scalar>(d: &AffineDefect<S>, asm: &Assumptions) -> AdmissibleSet<S> {
    if S::EXACT {
        exact_path(d, asm)
    } else {
        float_path(d)
    }
}

fn make_obstruction<S: Scalar>(
    index: DefectIndex,
    against: Option<DefectIndex>,
    expr: S,
    asm: &Assumptions,
) -> Obstruction<S> {
    let (reduced, decisive) = match expr.to_ratfunc() {
        Some(r) => {
            let rest = asm.strip(&r);
            let reduced = if rest.is_zero() {
                None
            } else {
                let lc = rest.leading_coeff().clone();
                Some(RatFunc::from_poly(rest.scale(&lc.recip())))
            };
            (reduced, asm.contradicts(&r))
        }
        None => (None, !expr.is_zero()),
    };
    Obstruction {
        index,
        against,
        expr,
        reduced,
        decisive,
    }
}

fn same_up_to_constant<S: Scalar>(a: &S, b: &S) -> bool {
    match (a.to_ratfunc(), b.to_ratfunc()) {
        (Some(x), Some(y)) => factor_match(&x, &y).is_some(),
        _ => a == b,
    }
}

fn push_requirement<S: Scalar>(list: &mut Vec<Obstruction<S>>, o: Obstruction<S>) {
    let dup = list.iter().any(|e| match (&e.reduced, &o.reduced) {
        (Some(x), Some(y)) => x == y,
        _ => same_up_to_constant(&e.expr, &o.expr),
    });
    if !dup {
        list.push(o);
    }
}

fn exact_path<S: Scalar>(d: &AffineDefect<S>, asm: &Assumptions) -> AdmissibleSet<S> {
    let mut obstructions: Vec<Obstruction<S>> = Vec::new();
    let mut candidates: Vec<(DefectIndex, S)> = Vec::new();
    let mut conditions: Vec<S> = Vec::new();
    let mut all_zero = true;

    for (idx, s, t) in d.iter() {
        if s.is_zero() && t.is_zero() {
            continue;
        }
        all_zero = false;
        if t.is_zero() {
            push_requirement(&mut obstructions, make_obstruction(idx, None, s.clone(), asm));
            continue;
        }
        let li = s.checked_div(t).expect("t is nonzero");
        let t_is_symbolic = t.to_ratfunc().is_some_and(|r| r.as_constant().is_none());
        if t_is_symbolic && !conditions.iter().any(|c| same_up_to_constant(c, t)) {
            conditions.push(t.clone());
        }
        if !candidates.iter().any(|(_, l)| l == &li) {
            candidates.push((idx, li));
        }
    }
    // Every pair of distinct forced values has to coincide.
    for (a, (ia, la)) in candidates.iter().enumerate() {
        for (ib, lb) in &candidates[a + 1..] {
            let diff = lb.clone() - la.clone();
            push_requirement(&mut obstructions, make_obstruction(*ib, Some(*ia), diff, asm));
        }
    }

    if all_zero {
        return AdmissibleSet::All;
    }
    if let Some(pos) = obstructions.iter().position(|o| o.decisive) {
        let witness = obstructions.remove(pos);
        return AdmissibleSet::Empty {
            witness,
            requirements: obstructions,
        };
    }
    match candidates.into_iter().next() {
        Some((_, value)) => AdmissibleSet::Single {
            value,
            conditions,
            requirements: obstructions,
            residual: None,
        },
        // Only t = 0 entries with s != 0, none of them decided.
        None => {
            let witness = obstructions.remove(0);
            AdmissibleSet::Empty {
                witness,
                requirements: obstructions,
            }
        }
    }
}

fn float_path<S: Scalar>(d: &AffineDefect<S>) -> AdmissibleSet<S> {
    let entries: Vec<(DefectIndex, &S, &S)> = d.iter().collect();
    if entries.iter().all(|(_, s, t)| s.is_zero() && t.is_zero()) {
        return AdmissibleSet::All;
    }
    let abs = |x: &S| x.to_f64().map_or(f64::INFINITY, f64::abs);
    let scale = entries
        .iter()
        .flat_map(|(_, s, t)| [abs(s), abs(t), s.scale(), t.scale()])
        .fold(1.0f64, f64::max);

    let usable: Vec<&(DefectIndex, &S, &S)> = entries.iter().filter(|(_, _, t)| !t.is_zero()).collect();
    if usable.is_empty() {
        let (idx, s, _) = entries
            .iter()
            .max_by(|a, b| abs(a.1).total_cmp(&abs(b.1)))
            .expect("81 entries");
        return float_empty(*idx, (*s).clone());
    }
    let mut num = S::zero();
    let mut den = S::zero();
    for (_, s, t) in &usable {
        num = num + (*s).clone() * (*t).clone();
        den = den + (*t).clone() * (*t).clone();
    }
    let value = match num.checked_div(&den) {
        Ok(v) => v,
        Err(_) => return float_empty(usable[0].0, usable[0].1.clone()),
    };
    let (worst, residual) = entries
        .iter()
        .map(|(idx, s, t)| (*idx, (*s).clone() - value.clone() * (*t).clone()))
        .max_by(|a, b| abs(&a.1).total_cmp(&abs(&b.1)))
        .expect("81 entries");
    let r = abs(&residual);
    if r <= FLOAT_ZERO_EPS * scale {
        AdmissibleSet::Single {
            value,
            conditions: Vec::new(),
            requirements: Vec::new(),
            residual: Some(r),
        }
    } else {
        float_empty(worst, residual)
    }
}

fn float_empty<S: Scalar>(index: DefectIndex, expr: S) -> AdmissibleSet<S> {
    AdmissibleSet::Empty {
        witness: Obstruction {
            index,
            against: None,
            expr,
            reduced: None,
            decisive: true,
        },
        requirements: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::defect_affine;
    use crate::exact::{parse_expr, q, BigRational, Float};
    use crate::frame::PointData;

    fn e(s: &str) -> RatFunc {
        parse_expr(s).unwrap()
    }

    #[test]
    fn horosphere_is_single_one() {
        let p = PointData::hopf(q(-4, 1), q(2, 1), q(1, 1), q(1, 1)).unwrap();
        let d = defect_affine(&p).unwrap();
        let set = admissible_l(&d, &Assumptions::new());
        assert_eq!(set.value(), Some(&q(1, 1)));
        assert!(set.is_unconditional_single());
        assert_eq!(set.summary(), "L = 1");
    }

    #[test]
    fn symbolic_hopf_is_empty_under_assumptions() {
        let p = PointData::hopf(e("c"), e("alpha"), e("lambda"), e("nu")).unwrap();
        let d = defect_affine(&p).unwrap();
        let asm = Assumptions::parse(&["c", "alpha", "lambda - nu", "c/4 + alpha*lambda", "c/4 + alpha*nu"]).unwrap();
        let set = admissible_l(&d, &asm);
        let AdmissibleSet::Empty { witness, .. } = &set else {
            panic!("expected empty, got {:?}", set.summary());
        };
        assert!(witness.decisive);
        // The conflict is between the two eigenvalues of l on the holomorphic plane.
        assert!(factor_match(&witness.expr, &e("alpha*(lambda - nu)")).is_some());
    }

    #[test]
    fn symbolic_hopf_without_assumptions_is_undecided() {
        let p = PointData::hopf(e("c"), e("alpha"), e("lambda"), e("nu")).unwrap();
        let d = defect_affine(&p).unwrap();
        let set = admissible_l(&d, &Assumptions::parse(&["c"]).unwrap());
        assert!(matches!(&set, AdmissibleSet::Single { requirements, .. } if !requirements.is_empty()));
    }

    #[test]
    fn l_zero_point_is_all() {
        let p = PointData::nonhopf(
            e("c"),
            e("alpha"),
            e("beta"),
            e("beta^2/alpha - c/(4*alpha)"),
            e("0"),
            e("-c/(4*alpha)"),
        )
        .unwrap();
        let d = defect_affine(&p).unwrap();
        assert_eq!(admissible_l(&d, &Assumptions::new()), AdmissibleSet::All);
    }

    #[test]
    fn generic_nonhopf_with_delta_is_empty() {
        let p = PointData::nonhopf(e("c"), e("alpha"), e("beta"), e("gamma"), e("delta"), e("mu")).unwrap();
        let d = defect_affine(&p).unwrap();
        let asm = Assumptions::parse(&["c", "alpha", "beta", "delta"]).unwrap();
        assert!(admissible_l(&d, &asm).is_empty());
    }

    #[test]
    fn rational_nonhopf_is_empty() {
        let p = PointData::nonhopf(q(4, 1), q(1, 2), q(3, 1), q(-2, 3), q(5, 1), q(1, 7)).unwrap();
        let d = defect_affine(&p).unwrap();
        assert!(admissible_l(&d, &Assumptions::new()).is_empty());
    }

    #[test]
    fn float_path_matches_exact() {
        let f = Float::new;
        let p = PointData::hopf(f(-4.0), f(2.5), f(0.5), f(0.5)).unwrap();
        let d = defect_affine(&p).unwrap();
        let set = admissible_l(&d, &Assumptions::new());
        let AdmissibleSet::Single { value, residual, .. } = &set else {
            panic!("expected single");
        };
        assert!((value.value() - 0.25).abs() < 1e-12);
        assert!(residual.unwrap() < 1e-12);

        let exact = PointData::hopf(q(-4, 1), q(5, 2), q(1, 2), q(1, 2)).unwrap();
        let de = defect_affine(&exact).unwrap();
        assert_eq!(
            admissible_l(&de, &Assumptions::new()).value(),
            Some(&BigRational::new(1.into(), 4.into()))
        );
    }

    #[test]
    fn float_nonhopf_is_empty() {
        let p = PointData::nonhopf(
            Float::new(4.0),
            Float::new(0.5),
            Float::new(3.0),
            Float::new(-0.6),
            Float::new(5.0),
            Float::new(0.1),
        )
        .unwrap();
        let d = defect_affine(&p).unwrap();
        assert!(admissible_l(&d, &Assumptions::new()).is_empty());
    }
}
