use std::fmt;

/// Generator families, listed in the global word order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    /// Shifted coordinate `X`; expands through table definitions.
    Shifted,
    Coordinate,
    Momentum,
    Theta,
    ThetaMomentum,
    AuxZ,
    AuxK,
}

impl Kind {
    pub const ALL: [Kind; 7] = [
        Kind::Shifted,
        Kind::Coordinate,
        Kind::Momentum,
        Kind::Theta,
        Kind::ThetaMomentum,
        Kind::AuxZ,
        Kind::AuxK,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Shifted => "X",
            Kind::Coordinate => "x",
            Kind::Momentum => "p",
            Kind::Theta => "theta",
            Kind::ThetaMomentum => "pi",
            Kind::AuxZ => "Z",
            Kind::AuxK => "K",
        }
    }

    pub fn from_name(s: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.name() == s)
    }

    /// Whether the generator carries an antisymmetric index pair.
    pub fn is_pair(self) -> bool {
        matches!(self, Kind::Theta | Kind::ThetaMomentum)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Index {
    Vector(u8),
    /// Antisymmetric pair, always stored with `.0 < .1`.
    Pair(u8, u8),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub kind: Kind,
    pub index: Index,
}

impl Generator {
    /// A vector-indexed generator. Panics for pair kinds.
    pub fn vector(kind: Kind, i: u8) -> Generator {
        assert!(!kind.is_pair(), "{} takes an index pair", kind.name());
        Generator {
            kind,
            index: Index::Vector(i),
        }
    }

    /// A pair-indexed generator together with the sign absorbed by ordering
    /// the indices. Returns `None` when `i == j` (the component vanishes).
    pub fn pair(kind: Kind, i: u8, j: u8) -> Option<(i8, Generator)> {
        assert!(kind.is_pair(), "{} takes a single index", kind.name());
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Less => Some((
                1,
                Generator {
                    kind,
                    index: Index::Pair(i, j),
                },
            )),
            std::cmp::Ordering::Greater => Some((
                -1,
                Generator {
                    kind,
                    index: Index::Pair(j, i),
                },
            )),
        }
    }

    pub fn x(i: u8) -> Generator {
        Generator::vector(Kind::Coordinate, i)
    }

    pub fn p(i: u8) -> Generator {
        Generator::vector(Kind::Momentum, i)
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Index::Vector(i) => write!(f, "{}[{}]", self.kind.name(), i),
            Index::Pair(i, j) => write!(f, "{}[{},{}]", self.kind.name(), i, j),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_normalizes_and_signs() {
        let (s, g) = Generator::pair(Kind::Theta, 2, 1).unwrap();
        assert_eq!(s, -1);
        assert_eq!(g.index, Index::Pair(1, 2));
        assert!(Generator::pair(Kind::ThetaMomentum, 3, 3).is_none());
    }

    #[test]
    fn global_order() {
        let x = Generator::x(3);
        let p = Generator::p(1);
        let (_, th) = Generator::pair(Kind::Theta, 1, 2).unwrap();
        let (_, pi) = Generator::pair(Kind::ThetaMomentum, 1, 2).unwrap();
        assert!(x < p && p < th && th < pi);
        assert!(Generator::x(1) < Generator::x(2));
        assert!(Generator::vector(Kind::Shifted, 9) < Generator::x(0));
    }
}
