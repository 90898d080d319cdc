//! Gauss curvature operator, the wedge operator, the structure Jacobi
//! operator, and the pseudo-parallelism defect of `l`.

use crate::error::Error;
use crate::exact::Scalar;
use crate::frame::{eta_of, g_inner, phi_apply, xi, FrameOperator, FrameVector, PointData};

/// The data the Gauss equation needs: `c` and a symmetric shape operator.
#[derive(Clone, Debug)]
pub struct CurvatureModel<S> {
    c: S,
    a: FrameOperator<S>,
}

impl<S: Scalar> CurvatureModel<S> {
    /// Works for any symmetric `A`, not only the adapted Hopf / non-Hopf forms.
    pub fn new(c: S, a: FrameOperator<S>) -> Result<Self, Error> {
        if !a.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(CurvatureModel { c, a })
    }

    pub fn from_point(p: &PointData<S>) -> Result<Self, Error> {
        CurvatureModel::new(p.c().clone(), p.shape_operator()?)
    }

    pub fn c(&self) -> &S {
        &self.c
    }

    pub fn shape_operator(&self) -> &FrameOperator<S> {
        &self.a
    }

    fn quarter_c(&self) -> S {
        self.c.clone() * S::from_ratio(1, 4)
    }

    /// `alpha = eta(A xi)`.
    pub fn alpha(&self) -> S {
        eta_of(&self.a.apply(&xi()))
    }

    /// Gauss form:
    /// `R(X,Y)Z = c/4 [g(Y,Z)X - g(X,Z)Y + g(phiY,Z)phiX - g(phiX,Z)phiY
    ///  - 2 g(phiX,Y) phiZ] + g(AY,Z)AX - g(AX,Z)AY`.
    pub fn riemann(&self, x: &FrameVector<S>, y: &FrameVector<S>, z: &FrameVector<S>) -> FrameVector<S> {
        let (px, py, pz) = (phi_apply(x), phi_apply(y), phi_apply(z));
        let (ax, ay) = (self.a.apply(x), self.a.apply(y));
        let two = S::from_ratio(2, 1);
        let bracket = x.scale(&g_inner(y, z)) - y.scale(&g_inner(x, z)) + px.scale(&g_inner(&py, z))
            - py.scale(&g_inner(&px, z))
            - pz.scale(&(two * g_inner(&px, y)));
        bracket.scale(&self.quarter_c()) + ax.scale(&g_inner(&ay, z)) - ay.scale(&g_inner(&ax, z))
    }

    /// `l X = c/4 [X - eta(X) xi] + alpha A X - eta(A X) A xi`.
    pub fn jacobi_l(&self) -> FrameOperator<S> {
        let alpha = self.alpha();
        let axi = self.a.apply(&xi());
        let cols: [[S; 3]; 3] = std::array::from_fn(|j| {
            let x = FrameVector::<S>::basis(j);
            let ax = self.a.apply(&x);
            let proj = x.clone() - xi::<S>().scale(&eta_of(&x));
            let v = proj.scale(&self.quarter_c()) + ax.scale(&alpha) - axi.scale(&eta_of(&ax));
            v.0
        });
        FrameOperator::from_columns(cols)
    }

    /// The defect of `R . l = L (X ^ Y) . l`, stored affine in `L`.
    pub fn defect_affine(&self) -> AffineDefect<S> {
        let l = self.jacobi_l();
        let basis: Vec<FrameVector<S>> = (0..3).map(FrameVector::basis).collect();
        let zero_pair = || (FrameVector::zero(), FrameVector::zero());
        let mut entries: Entries<S> =
            std::array::from_fn(|_| std::array::from_fn(|_| std::array::from_fn(|_| zero_pair())));
        for i in 0..3 {
            for j in (i + 1)..3 {
                for k in 0..3 {
                    let (x, y, z) = (&basis[i], &basis[j], &basis[k]);
                    let lz = l.apply(z);
                    let s = self.riemann(x, y, &lz) - l.apply(&self.riemann(x, y, z));
                    let t = wedge(x, y, &lz) - l.apply(&wedge(x, y, z));
                    entries[j][i][k] = (-s.clone(), -t.clone());
                    entries[i][j][k] = (s, t);
                }
            }
        }
        AffineDefect { entries }
    }
}

/// `(X ^ Y) Z = g(Y,Z) X - g(Z,X) Y`.
pub fn wedge<S: Scalar>(x: &FrameVector<S>, y: &FrameVector<S>, z: &FrameVector<S>) -> FrameVector<S> {
    x.scale(&g_inner(y, z)) - y.scale(&g_inner(z, x))
}

pub fn riemann<S: Scalar>(
    p: &PointData<S>,
    x: &FrameVector<S>,
    y: &FrameVector<S>,
    z: &FrameVector<S>,
) -> Result<FrameVector<S>, Error> {
    Ok(CurvatureModel::from_point(p)?.riemann(x, y, z))
}

pub fn jacobi_l<S: Scalar>(p: &PointData<S>) -> Result<FrameOperator<S>, Error> {
    Ok(CurvatureModel::from_point(p)?.jacobi_l())
}

pub fn defect_affine<S: Scalar>(p: &PointData<S>) -> Result<AffineDefect<S>, Error> {
    Ok(CurvatureModel::from_point(p)?.defect_affine())
}

/// Index of one defect component: input triple `(Xi, Xj, Xk)` and output
/// coordinate `m`, all 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DefectIndex {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub m: usize,
}

impl DefectIndex {
    pub fn all() -> impl Iterator<Item = DefectIndex> {
        (0..81).map(|n| DefectIndex {
            i: n / 27,
            j: (n / 9) % 3,
            k: (n / 3) % 3,
            m: n % 3,
        })
    }
}

impl std::fmt::Display for DefectIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        use crate::exact::Direction;
        let n = |i: usize| Direction::from_index(i).name();
        write!(f, "({},{},{})_{}", n(self.i), n(self.j), n(self.k), n(self.m))
    }
}

/// `(s, t)` vectors indexed by input triple.
type Entries<S> = [[[(FrameVector<S>, FrameVector<S>); 3]; 3]; 3];

/// All 81 defect components, each the pair `(s, t)` meaning `s - L t`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineDefect<S> {
    entries: Entries<S>,
}

impl<S: Scalar> AffineDefect<S> {
    pub fn entry(&self, idx: DefectIndex) -> (&S, &S) {
        let (s, t) = &self.entries[idx.i][idx.j][idx.k];
        (&s.0[idx.m], &t.0[idx.m])
    }

    /// The vectors `(s, t)` for one input triple.
    pub fn vectors(&self, i: usize, j: usize, k: usize) -> (&FrameVector<S>, &FrameVector<S>) {
        let (s, t) = &self.entries[i][j][k];
        (s, t)
    }

    pub fn iter(&self) -> impl Iterator<Item = (DefectIndex, &S, &S)> + '_ {
        DefectIndex::all().map(move |idx| {
            let (s, t) = self.entry(idx);
            (idx, s, t)
        })
    }

    /// `s - L t` for one component.
    pub fn component(&self, idx: DefectIndex, l_value: &S) -> S {
        let (s, t) = self.entry(idx);
        s.clone() - l_value.clone() * t.clone()
    }

    pub fn eval(&self, l_value: &S) -> Vec<S> {
        DefectIndex::all().map(|idx| self.component(idx, l_value)).collect()
    }
}

pub fn defect_eval<S: Scalar>(d: &AffineDefect<S>, l_value: &S) -> Vec<S> {
    d.eval(l_value)
}
