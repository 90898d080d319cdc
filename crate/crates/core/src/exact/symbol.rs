//! Symbols of the closed base alphabet plus formal jet symbols.
//!
//! A symbol is a small `Copy` value: a base name and an optional path of
//! frame directions. Equality and ordering are structural, so no interning
//! table is needed and symbols can be shared freely across threads.

use std::fmt;

use crate::error::Error;

/// The closed base alphabet, in the order used by the monomial ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    C,
    L,
    Alpha,
    Beta,
    Gamma,
    Delta,
    Mu,
    Lambda,
    Nu,
    Kappa1,
    Kappa2,
    Kappa3,
    T,
    U,
    S,
}

impl Base {
    pub const ALL: [Base; 15] = [
        Base::C,
        Base::L,
        Base::Alpha,
        Base::Beta,
        Base::Gamma,
        Base::Delta,
        Base::Mu,
        Base::Lambda,
        Base::Nu,
        Base::Kappa1,
        Base::Kappa2,
        Base::Kappa3,
        Base::T,
        Base::U,
        Base::S,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Base::C => "c",
            Base::L => "L",
            Base::Alpha => "alpha",
            Base::Beta => "beta",
            Base::Gamma => "gamma",
            Base::Delta => "delta",
            Base::Mu => "mu",
            Base::Lambda => "lambda",
            Base::Nu => "nu",
            Base::Kappa1 => "kappa1",
            Base::Kappa2 => "kappa2",
            Base::Kappa3 => "kappa3",
            Base::T => "t",
            Base::U => "u",
            Base::S => "s",
        }
    }

    pub fn from_name(name: &str) -> Option<Base> {
        Base::ALL.iter().copied().find(|b| b.name() == name)
    }
}

/// One of the three ordered frame fields `(X1, X2, X3) = (U, phiU, xi)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    U,
    PhiU,
    Xi,
}

impl Direction {
    pub const ALL: [Direction; 3] = [Direction::U, Direction::PhiU, Direction::Xi];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Direction {
        Direction::ALL[i]
    }

    pub fn name(self) -> &'static str {
        match self {
            Direction::U => "U",
            Direction::PhiU => "phiU",
            Direction::Xi => "xi",
        }
    }

    /// Accepts both the non-Hopf (`U`, `phiU`) and Hopf (`e`, `phie`) spellings.
    pub fn from_name(name: &str) -> Option<Direction> {
        match name {
            "U" | "e" | "X1" => Some(Direction::U),
            "phiU" | "phie" | "X2" => Some(Direction::PhiU),
            "xi" | "X3" => Some(Direction::Xi),
            _ => None,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

const MAX_JET_DEPTH: u8 = 8;

/// A base symbol, possibly tagged with a sequence of differentiation
/// directions (innermost first).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    // field order fixes the derived ordering: base symbols before jets
    depth: u8,
    base: Base,
    path: u16,
}

impl Symbol {
    pub const fn base(base: Base) -> Symbol {
        Symbol {
            depth: 0,
            base,
            path: 0,
        }
    }

    /// Looks up a base symbol by name; anything outside the alphabet is rejected.
    pub fn named(name: &str) -> Result<Symbol, Error> {
        Base::from_name(name)
            .map(Symbol::base)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn base_of(&self) -> Base {
        self.base
    }

    pub fn jet_depth(&self) -> usize {
        self.depth as usize
    }

    pub fn is_jet(&self) -> bool {
        self.depth > 0
    }

    /// Directions applied so far, innermost first.
    pub fn directions(&self) -> Vec<Direction> {
        (0..self.depth)
            .map(|i| Direction::from_index(((self.path >> (2 * i)) & 3) as usize))
            .collect()
    }

    /// The jet `D_dir(self)`. Only the derive module hands these out.
    pub(crate) fn differentiated(self, dir: Direction) -> Result<Symbol, Error> {
        if self.depth >= MAX_JET_DEPTH {
            return Err(Error::JetTooDeep(self.to_string()));
        }
        Ok(Symbol {
            depth: self.depth + 1,
            base: self.base,
            path: self.path | ((dir.index() as u16) << (2 * self.depth)),
        })
    }

    /// Symbols whose formal derivative vanishes: the ambient curvature `c`.
    pub fn is_constant(&self) -> bool {
        self.base == Base::C
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dirs = self.directions();
        for d in dirs.iter().rev() {
            write!(f, "D_{}(", d)?;
        }
        f.write_str(self.base.name())?;
        for _ in &dirs {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub mod sym {
    //! Shorthand constants for the base alphabet.
    use super::{Base, Symbol};

    pub const C: Symbol = Symbol::base(Base::C);
    pub const L: Symbol = Symbol::base(Base::L);
    pub const ALPHA: Symbol = Symbol::base(Base::Alpha);
    pub const BETA: Symbol = Symbol::base(Base::Beta);
    pub const GAMMA: Symbol = Symbol::base(Base::Gamma);
    pub const DELTA: Symbol = Symbol::base(Base::Delta);
    pub const MU: Symbol = Symbol::base(Base::Mu);
    pub const LAMBDA: Symbol = Symbol::base(Base::Lambda);
    pub const NU: Symbol = Symbol::base(Base::Nu);
    pub const KAPPA1: Symbol = Symbol::base(Base::Kappa1);
    pub const KAPPA2: Symbol = Symbol::base(Base::Kappa2);
    pub const KAPPA3: Symbol = Symbol::base(Base::Kappa3);
    pub const T: Symbol = Symbol::base(Base::T);
    pub const U: Symbol = Symbol::base(Base::U);
    pub const S: Symbol = Symbol::base(Base::S);
}
