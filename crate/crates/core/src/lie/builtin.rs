use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use super::format::{parse_liealg, LieFormatError};
use super::presentation::LiePresentation;

/// One of the seven built-in groups `G1`..`G7`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GroupId(u8);

impl GroupId {
    pub const ALL: [GroupId; 7] = [
        GroupId(1),
        GroupId(2),
        GroupId(3),
        GroupId(4),
        GroupId(5),
        GroupId(6),
        GroupId(7),
    ];

    pub fn new(n: u8) -> Option<GroupId> {
        (1..=7).contains(&n).then_some(GroupId(n))
    }

    pub fn number(self) -> u8 {
        self.0
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G{}", self.0)
    }
}

impl FromStr for GroupId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.strip_prefix('G')
            .or_else(|| s.strip_prefix('g'))
            .and_then(|n| n.parse().ok())
            .and_then(GroupId::new)
            .ok_or_else(|| format!("unknown group '{s}' (expected G1..G7)"))
    }
}

const SOURCES: [&str; 7] = [
    include_str!("../../data/algebras/G1.liealg"),
    include_str!("../../data/algebras/G2.liealg"),
    include_str!("../../data/algebras/G3.liealg"),
    include_str!("../../data/algebras/G4.liealg"),
    include_str!("../../data/algebras/G5.liealg"),
    include_str!("../../data/algebras/G6.liealg"),
    include_str!("../../data/algebras/G7.liealg"),
];

pub fn builtin_ids() -> [GroupId; 7] {
    GroupId::ALL
}

/// Built-in presentation; the bundled sources are known to parse.
pub fn builtin(id: GroupId) -> LiePresentation {
    parse_liealg(SOURCES[id.0 as usize - 1]).expect("bundled presentation parses")
}

/// Where a presentation comes from.
#[derive(Clone, Debug)]
pub enum PresentationSource {
    Builtin(GroupId),
    Text(String),
    File(PathBuf),
}

pub fn get_presentation(src: &PresentationSource) -> Result<LiePresentation, LieFormatError> {
    match src {
        PresentationSource::Builtin(id) => Ok(builtin(*id)),
        PresentationSource::Text(t) => parse_liealg(t),
        PresentationSource::File(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| LieFormatError::Malformed {
                line: 0,
                message: format!("cannot read {}: {e}", p.display()),
            })?;
            parse_liealg(&text)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::print_liealg;
    use crate::poly::{basis_vec, poly, zero_vec};

    #[test]
    fn all_builtins_parse_and_round_trip() {
        for id in GroupId::ALL {
            let p = builtin(id);
            assert_eq!(p.name, id.to_string());
            let text = print_liealg(&p);
            assert_eq!(print_liealg(&parse_liealg(&text).unwrap()), text);
        }
    }

    #[test]
    fn documented_brackets() {
        let g1 = builtin(GroupId(1));
        assert_eq!(
            g1.bracket(&basis_vec(0), &basis_vec(1)),
            [poly("alpha"), poly("0"), poly("-beta")]
        );
        let g3 = builtin(GroupId(3));
        assert_eq!(
            g3.bracket(&basis_vec(1), &basis_vec(2)),
            [poly("alpha"), poly("0"), poly("0")]
        );
        let g5 = builtin(GroupId(5));
        assert_eq!(g5.bracket(&basis_vec(0), &basis_vec(1)), zero_vec());
        assert!(g5.constraints.contains(&poly("alpha*gamma + beta*delta")));
    }

    #[test]
    fn constraints_and_inequations() {
        let expect: [(&[&str], &[&str]); 7] = [
            (&[], &["alpha"]),
            (&[], &["gamma"]),
            (&[], &[]),
            (&[], &[]),
            (&["alpha*gamma + beta*delta"], &["alpha + delta"]),
            (&["alpha*gamma - beta*delta"], &["alpha + delta"]),
            (&["alpha*gamma"], &["alpha + delta"]),
        ];
        for (id, (cons, ineqs)) in GroupId::ALL.iter().zip(expect) {
            let p = builtin(*id);
            let c: Vec<_> = cons.iter().map(|s| poly(s)).collect();
            let i: Vec<_> = ineqs.iter().map(|s| poly(s)).collect();
            assert_eq!(p.constraints, c, "{id}");
            assert_eq!(p.inequations, i, "{id}");
            assert_eq!(p.is_eta_valued(), id.number() == 4);
        }
    }

    #[test]
    fn eta_branches() {
        let g4 = builtin(GroupId(4));
        let br = g4.branches();
        assert_eq!(br.len(), 2);
        assert_eq!(br[0].1.structure(0, 1)[2], poly("2 - beta"));
        assert_eq!(br[1].1.structure(0, 1)[2], poly("-2 - beta"));
        assert_eq!(br[1].1.shorthand("b3"), Some(&poly("alpha/2 - 1")));
    }

    #[test]
    fn group_ids_parse() {
        assert_eq!("G6".parse::<GroupId>(), Ok(GroupId(6)));
        assert!("G8".parse::<GroupId>().is_err());
    }
}
