//! `lssd-game v1` text format.
//!
//! ```text
//! lssd-game v1
//! parties 2
//! alphabets 3 2 2
//! # x a b probability
//! 0 1 0 1/5
//! ```

use std::fmt::Write as _;
use std::path::Path;

use super::{GameError, JointDistribution};
use crate::rational::{parse_rational, Frac};

const HEADER: &str = "lssd-game v1";

fn parse_err(line: usize, message: impl Into<String>) -> GameError {
    GameError::Parse { line, message: message.into() }
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize, GameError> {
    tok.parse().map_err(|_| parse_err(line, format!("invalid {what} `{tok}`")))
}

/// Parses the text of a game file. Duplicate entries are rejected, missing
/// entries are zero, and the result must sum to exactly one.
pub fn parse_game(text: &str) -> Result<JointDistribution, GameError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (n, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    if header != HEADER {
        return Err(parse_err(n, format!("expected `{HEADER}`")));
    }

    let (n, parties_line) = lines.next().ok_or_else(|| parse_err(n + 1, "missing `parties`"))?;
    let parties = match parties_line.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["parties", r] => parse_usize(r, n, "party count")?,
        _ => return Err(parse_err(n, "expected `parties <r>`")),
    };
    if parties == 0 {
        return Err(parse_err(n, "party count must be positive"));
    }

    let (n, alpha_line) = lines.next().ok_or_else(|| parse_err(n + 1, "missing `alphabets`"))?;
    let toks: Vec<&str> = alpha_line.split_whitespace().collect();
    if toks.first() != Some(&"alphabets") || toks.len() != parties + 2 {
        return Err(parse_err(n, format!("expected `alphabets` with {} sizes", parties + 1)));
    }
    let sizes = toks[1..]
        .iter()
        .map(|t| parse_usize(t, n, "alphabet size"))
        .collect::<Result<Vec<_>, _>>()?;
    if sizes.contains(&0) {
        return Err(parse_err(n, "alphabet sizes must be positive"));
    }
    let referee_size = sizes[0];
    let party_sizes = sizes[1..].to_vec();

    let mut seen = std::collections::HashSet::new();
    let mut entries = Vec::new();
    for (n, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != parties + 2 {
            return Err(parse_err(n, format!("expected {} indices and a probability", parties + 1)));
        }
        let idx = toks[..=parties]
            .iter()
            .map(|t| parse_usize(t, n, "index"))
            .collect::<Result<Vec<_>, _>>()?;
        if idx[0] >= referee_size
            || idx[1..].iter().zip(&party_sizes).any(|(a, s)| a >= s)
        {
            return Err(parse_err(n, "index out of range"));
        }
        let p = parse_rational(toks[parties + 1]).map_err(|e| parse_err(n, e.to_string()))?;
        if !seen.insert(idx.clone()) {
            return Err(parse_err(n, "duplicate entry"));
        }
        entries.push((idx[0], idx[1..].to_vec(), p));
    }
    JointDistribution::from_entries(referee_size, party_sizes, entries)
}

/// Serializes nonzero entries in table order.
pub fn write_game(dist: &JointDistribution) -> String {
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    writeln!(out, "parties {}", dist.num_parties()).unwrap();
    write!(out, "alphabets {}", dist.referee_size()).unwrap();
    for s in dist.party_sizes() {
        write!(out, " {s}").unwrap();
    }
    out.push('\n');
    for (x, inputs, p) in dist.support() {
        write!(out, "{x}").unwrap();
        for a in inputs {
            write!(out, " {a}").unwrap();
        }
        writeln!(out, " {}", Frac(p)).unwrap();
    }
    out
}

pub fn load_game(path: impl AsRef<Path>) -> Result<JointDistribution, GameError> {
    parse_game(&std::fs::read_to_string(path)?)
}

pub fn save_game(dist: &JointDistribution, path: impl AsRef<Path>) -> Result<(), GameError> {
    std::fs::write(path, write_game(dist))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::theorem1_game;
    use crate::rational::ratio;

    #[test]
    fn round_trip_through_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t1.game");
        let g = theorem1_game();
        save_game(&g, &path).unwrap();
        assert_eq!(load_game(&path).unwrap(), g);
    }

    #[test]
    fn zero_denominator_is_a_parse_error() {
        let text = "lssd-game v1\nparties 2\nalphabets 1 1 1\n0 0 0 1/0\n";
        match parse_game(text) {
            Err(GameError::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn three_party_file() {
        let text = "\
lssd-game v1
# three guessers
parties 3
alphabets 2 2 1 3
0 0 0 0 1/2   # first
1 1 0 2 1/2
";
        let g = parse_game(text).unwrap();
        assert_eq!(g.num_parties(), 3);
        assert_eq!(g.table().len(), 2 * 2 * 3);
        assert_eq!(*g.get(1, &[1, 0, 2]), ratio(1, 2));
        assert_eq!(*g.get(0, &[0, 0, 0]), ratio(1, 2));
        assert_eq!(*g.get(1, &[0, 0, 2]), ratio(0, 1));
    }

    #[test]
    fn structural_errors() {
        let cases = [
            ("", 1),
            ("lssd-game v2\n", 1),
            ("lssd-game v1\nparties x\n", 2),
            ("lssd-game v1\nparties 2\nalphabets 2 2\n", 3),
            ("lssd-game v1\nparties 2\nalphabets 2 2 2\n0 0 2 1/1\n", 4),
            ("lssd-game v1\nparties 2\nalphabets 2 2 2\n0 0 0 1/2\n0 0 0 1/2\n", 5),
        ];
        for (text, want) in cases {
            match parse_game(text) {
                Err(GameError::Parse { line, .. }) => assert_eq!(line, want, "{text:?}"),
                other => panic!("{text:?}: unexpected {other:?}"),
            }
        }
        let short = "lssd-game v1\nparties 1\nalphabets 2 2\n0 0 1/2\n";
        assert!(matches!(parse_game(short), Err(GameError::NotNormalized { .. })));
    }
}
