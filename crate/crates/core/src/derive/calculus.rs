//! Connection tables, Codazzi and curvature residuals, formal jets.

use std::fmt;

use crate::curvature::CurvatureModel;
use crate::error::Error;
use crate::exact::{Direction, RatFunc, Symbol};
use crate::frame::{eta_of, g_inner, phi_apply, xi, FrameOperator, FrameVector, PointData, Shape};

type V = FrameVector<RatFunc>;

const DIRS: [Direction; 3] = [Direction::U, Direction::PhiU, Direction::Xi];

/// The jet `D_{dirs[n-1]}(... D_{dirs[0]}(base))`, innermost direction first.
pub fn jet(base: Symbol, dirs: &[Direction]) -> Result<Symbol, Error> {
    dirs.iter().try_fold(base, |s, d| s.differentiated(*d))
}

/// A relation `expr = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub label: String,
    pub expr: RatFunc,
}

impl Relation {
    pub fn new(label: impl Into<String>, expr: RatFunc) -> Relation {
        Relation {
            label: label.into(),
            expr,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.expr.is_zero()
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} = 0", self.label, self.expr)
    }
}

/// `nabla[x][y] = ∇_{X_x} X_y` in the frame `(U, phiU, xi)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionTable {
    nabla: [[V; 3]; 3],
}

impl ConnectionTable {
    /// Rejects tables that are not compatible with the constant metric.
    pub fn new(nabla: [[V; 3]; 3]) -> Result<ConnectionTable, Error> {
        let t = ConnectionTable { nabla };
        if !t.is_metric() {
            return Err(Error::InvalidPoint("connection is not metric".into()));
        }
        Ok(t)
    }

    /// `g(∇_X Y, Z) + g(Y, ∇_X Z) = 0` for all frame fields.
    pub fn is_metric(&self) -> bool {
        (0..3).all(|x| {
            (0..3).all(|y| {
                (0..3).all(|z| {
                    let lhs = g_inner(&self.nabla[x][y], &V::basis(z)) + g_inner(&V::basis(y), &self.nabla[x][z]);
                    lhs.is_zero()
                })
            })
        })
    }

    pub fn nabla(&self, x: Direction, y: Direction) -> &V {
        &self.nabla[x.index()][y.index()]
    }

    /// `∇_X V = Σ X(v_k) X_k + v_k ∇_X X_k`.
    pub fn covariant(&self, x: Direction, v: &V) -> Result<V, Error> {
        let mut out = V::zero();
        for (k, vk) in v.components().iter().enumerate() {
            if vk.is_zero() {
                continue;
            }
            out = out + V::basis(k).scale(&vk.derivative(x)?) + self.nabla[x.index()][k].scale(vk);
        }
        Ok(out)
    }

    /// `∇_V W` for a field `V = Σ v_k X_k` and frame field `W`.
    pub fn along(&self, v: &V, w: Direction) -> V {
        DIRS.iter()
            .zip(v.components())
            .fold(V::zero(), |acc, (d, vk)| acc + self.nabla(*d, w).scale(vk))
    }

    /// `[X, Y] = ∇_X Y - ∇_Y X`.
    pub fn bracket(&self, x: Direction, y: Direction) -> V {
        self.nabla(x, y).clone() - self.nabla(y, x).clone()
    }

    /// The derivative of `f` along the field `v`.
    pub fn apply_field(v: &V, f: &RatFunc) -> Result<RatFunc, Error> {
        let mut out = RatFunc::int(0);
        for (d, vk) in DIRS.iter().zip(v.components()) {
            if !vk.is_zero() {
                out = out + vk.clone() * f.derivative(*d)?;
            }
        }
        Ok(out)
    }

    pub fn map(&self, f: impl Fn(&RatFunc) -> Result<RatFunc, Error>) -> Result<ConnectionTable, Error> {
        let mut nabla: [[V; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| V::zero()));
        for (x, row) in self.nabla.iter().enumerate() {
            for (y, v) in row.iter().enumerate() {
                let [a, b, c] = v.components();
                nabla[x][y] = V::new(f(a)?, f(b)?, f(c)?);
            }
        }
        ConnectionTable::new(nabla)
    }
}

/// The connection of a non-Hopf point:
/// `∇_U xi = -δU + γ phiU`, `∇_phiU xi = -μU + δ phiU`, `∇_xi xi = β phiU`,
/// `∇_U U = κ1 phiU + δ xi`, `∇_phiU U = κ2 phiU + μ xi`, `∇_xi U = κ3 phiU`,
/// and `∇_X phiU` fixed by metric compatibility.
pub fn connection_from_spec(p: &PointData<RatFunc>) -> Result<ConnectionTable, Error> {
    let Shape::NonHopf {
        beta, gamma, delta, mu, ..
    } = p.shape()
    else {
        return Err(Error::Unsupported("connection table for Hopf points".into()));
    };
    let k = |s: Symbol| RatFunc::var(s);
    let (k1, k2, k3) = (
        k(crate::exact::sym::KAPPA1),
        k(crate::exact::sym::KAPPA2),
        k(crate::exact::sym::KAPPA3),
    );
    let z = RatFunc::int(0);
    let v = |a: &RatFunc, b: &RatFunc, c: &RatFunc| V::new(a.clone(), b.clone(), c.clone());
    let nabla = [
        // along U: U, phiU, xi
        [v(&z, &k1, delta), v(&-&k1, &z, &-gamma), v(&-delta, gamma, &z)],
        // along phiU
        [v(&z, &k2, mu), v(&-&k2, &z, &-delta), v(&-mu, delta, &z)],
        // along xi
        [v(&z, &k3, &z), v(&-&k3, &z, &-beta), v(&z, beta, &z)],
    ];
    ConnectionTable::new(nabla)
}

/// `(∇_X A)Y = ∇_X(AY) - A ∇_X Y`.
fn nabla_a(table: &ConnectionTable, a: &FrameOperator<RatFunc>, x: Direction, y: Direction) -> Result<V, Error> {
    let ay = a.column(y.index());
    Ok(table.covariant(x, &ay)? - a.apply(table.nabla(x, y)))
}

/// `(∇_X A)Y - (∇_Y A)X - c/4 [η(X)φY - η(Y)φX - 2 g(φX,Y) ξ]`.
pub fn codazzi_residual(
    p: &PointData<RatFunc>,
    table: &ConnectionTable,
    x: Direction,
    y: Direction,
) -> Result<V, Error> {
    let a = p.shape_operator()?;
    let (vx, vy) = (V::basis(x.index()), V::basis(y.index()));
    let quarter_c = p.c().clone() * RatFunc::ratio(1, 4);
    let rhs = (phi_apply(&vy).scale(&eta_of(&vx))
        - phi_apply(&vx).scale(&eta_of(&vy))
        - xi::<RatFunc>().scale(&(RatFunc::int(2) * g_inner(&phi_apply(&vx), &vy))))
    .scale(&quarter_c);
    Ok(nabla_a(table, &a, x, y)? - nabla_a(table, &a, y, x)? - rhs)
}

/// `∇_X ∇_Y Z - ∇_Y ∇_X Z - ∇_[X,Y] Z` minus the Gauss form of `R(X,Y)Z`.
pub fn curvature_commutation_residual(
    p: &PointData<RatFunc>,
    table: &ConnectionTable,
    x: Direction,
    y: Direction,
    z: Direction,
) -> Result<V, Error> {
    let xy = table.covariant(x, table.nabla(y, z))?;
    let yx = table.covariant(y, table.nabla(x, z))?;
    let br = table.along(&table.bracket(x, y), z);
    let model = CurvatureModel::from_point(p)?;
    let gauss = model.riemann(&V::basis(x.index()), &V::basis(y.index()), &V::basis(z.index()));
    Ok(xy - yx - br - gauss)
}

/// The formal derivative of a relation, labelled `D_dir(label)`.
pub fn differentiate(rel: &Relation, dir: Direction) -> Result<Relation, Error> {
    Ok(Relation::new(
        format!("D_{}({})", dir.name(), rel.label),
        rel.expr.derivative(dir)?,
    ))
}

/// `X(Y f) - Y(X f) - [X,Y] f = 0`.
pub fn commutator_relation(table: &ConnectionTable, x: Direction, y: Direction, f: Symbol) -> Result<Relation, Error> {
    let f = RatFunc::var(f);
    let xy = f.derivative(y)?.derivative(x)?;
    let yx = f.derivative(x)?.derivative(y)?;
    let br = ConnectionTable::apply_field(&table.bracket(x, y), &f)?;
    Ok(Relation::new(format!("[{},{}]{}", x.name(), y.name(), f), xy - yx - br))
}

/// The non-Hopf point with `l = 0`: `γ = β²/α - c/(4α)`, `δ = 0`, `μ = -c/(4α)`.
pub fn l0_point() -> PointData<RatFunc> {
    let e = |s: &str| crate::exact::parse_expr(s).expect("fixed expression");
    PointData::nonhopf(
        e("c"),
        e("alpha"),
        e("beta"),
        e("beta^2/alpha - c/(4*alpha)"),
        e("0"),
        e("-c/(4*alpha)"),
    )
    .expect("symbolic c and beta are nonzero")
}

/// A symbolic non-Hopf point, every entry its own symbol.
pub fn generic_point() -> PointData<RatFunc> {
    let e = |s: &str| crate::exact::parse_expr(s).expect("fixed expression");
    PointData::nonhopf(e("c"), e("alpha"), e("beta"), e("gamma"), e("delta"), e("mu"))
        .expect("symbolic c and beta are nonzero")
}
