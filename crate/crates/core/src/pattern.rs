//! Falling patterns: the per-face verdict map (stable, or tips onto a named
//! neighbor) and the arrow notation `B->A->D<-C` used to write them.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Label;

/// What one face does when the body is placed on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FaceOutcome {
    Stable,
    TipsTo(Label),
}

/// Assignment of an outcome to each of the four faces.
///
/// Valid patterns have at least one stable face (quasi-static motion
/// terminates) and never name a face as its own successor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FallingPattern {
    outcomes: [FaceOutcome; 4],
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum PatternError {
    #[error("a falling pattern needs at least one stable face")]
    NoStableFace,
    #[error("face {0} cannot tip onto itself")]
    SelfSuccessor(Label),
}

/// Errors from parsing the arrow notation, with byte positions into the
/// input.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum PatternParseError {
    #[error("expected a face label at position {pos}")]
    BadLabel { pos: usize },
    #[error("expected '->' or '<-' at position {pos}")]
    BadArrow { pos: usize },
    #[error("cycle through face {face} at position {pos}")]
    Cycle { face: Label, pos: usize },
    #[error("face {face} repeated at position {pos}")]
    DuplicateFace { face: Label, pos: usize },
    #[error("unexpected trailing input at position {pos}")]
    TrailingInput { pos: usize },
}

impl FallingPattern {
    pub fn new(outcomes: [FaceOutcome; 4]) -> Result<FallingPattern, PatternError> {
        if !outcomes.contains(&FaceOutcome::Stable) {
            return Err(PatternError::NoStableFace);
        }
        for (i, o) in outcomes.iter().enumerate() {
            if let FaceOutcome::TipsTo(next) = o {
                if next.index() == i {
                    return Err(PatternError::SelfSuccessor(*next));
                }
            }
        }
        Ok(FallingPattern { outcomes })
    }

    pub fn outcome(&self, face: Label) -> FaceOutcome {
        self.outcomes[face.index()]
    }

    pub fn successor(&self, face: Label) -> Option<Label> {
        match self.outcome(face) {
            FaceOutcome::Stable => None,
            FaceOutcome::TipsTo(next) => Some(next),
        }
    }

    pub fn stable_faces(&self) -> Vec<Label> {
        Label::ALL
            .iter()
            .copied()
            .filter(|l| self.outcome(*l) == FaceOutcome::Stable)
            .collect()
    }

    pub fn is_monostable(&self) -> bool {
        self.stable_faces().len() == 1
    }

    /// When the tip arrows form a path visiting all four faces, returns the
    /// faces in chain order, starting from the endpoint farther from the
    /// stable face (the convention the arrow notation uses).
    pub fn chain(&self) -> Option<[Label; 4]> {
        let stable = self.stable_faces();
        if stable.len() != 1 {
            return None;
        }
        // Undirected adjacency from the three arrows.
        let mut degree = [0usize; 4];
        let mut adj: Vec<(usize, usize)> = Vec::new();
        for l in Label::ALL {
            if let Some(next) = self.successor(l) {
                let e = (l.index().min(next.index()), l.index().max(next.index()));
                if adj.contains(&e) {
                    return None;
                }
                adj.push(e);
                degree[e.0] += 1;
                degree[e.1] += 1;
            }
        }
        if adj.len() != 3 {
            return None;
        }
        let ends: Vec<usize> = (0..4).filter(|&i| degree[i] == 1).collect();
        if ends.len() != 2 || degree.contains(&0) {
            return None;
        }
        let walk = |start: usize| -> Option<[Label; 4]> {
            let mut order = [start; 4];
            let mut prev = usize::MAX;
            let mut cur = start;
            for slot in order.iter_mut().skip(1) {
                let next = adj
                    .iter()
                    .filter_map(|&(a, b)| {
                        if a == cur && b != prev {
                            Some(b)
                        } else if b == cur && a != prev {
                            Some(a)
                        } else {
                            None
                        }
                    })
                    .next()?;
                *slot = next;
                prev = cur;
                cur = next;
            }
            Some(order.map(Label::from_index))
        };
        let c0 = walk(ends[0])?;
        let sink_pos = c0.iter().position(|l| *l == stable[0]).unwrap();
        let order = if sink_pos >= 2 { c0 } else { walk(ends[1])? };
        Some(order)
    }
}

impl fmt::Display for FallingPattern {
    /// Chain patterns print in arrow notation; other patterns as a comma
    /// list of per-face verdicts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(chain) = self.chain() {
            for (i, face) in chain.iter().enumerate() {
                if i > 0 {
                    let prev = chain[i - 1];
                    let arrow = if self.successor(prev) == Some(*face) {
                        "->"
                    } else {
                        "<-"
                    };
                    f.write_str(arrow)?;
                }
                write!(f, "{face}")?;
            }
            return Ok(());
        }
        let mut first = true;
        for l in Label::ALL {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            match self.outcome(l) {
                FaceOutcome::Stable => write!(f, "{l}: stable")?,
                FaceOutcome::TipsTo(next) => write!(f, "{l}->{next}")?,
            }
        }
        Ok(())
    }
}

/// Parses arrow notation like `B->A->D<-C`: `X->Y` reads "X tips onto Y",
/// `X<-Y` reads "Y tips onto X", and the face without an outgoing arrow is
/// the stable one. Whitespace around tokens is allowed.
pub fn parse_pattern(input: &str) -> Result<FallingPattern, PatternParseError> {
    let bytes = input.as_bytes();
    let mut pos = 0usize;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };

    let mut faces: Vec<(Label, usize)> = Vec::new();
    let mut arrows: Vec<bool> = Vec::new(); // true = "->"

    skip_ws(&mut pos);
    for step in 0..4 {
        if step > 0 {
            skip_ws(&mut pos);
            let arrow_pos = pos;
            if pos + 2 <= bytes.len() && &bytes[pos..pos + 2] == b"->" {
                arrows.push(true);
            } else if pos + 2 <= bytes.len() && &bytes[pos..pos + 2] == b"<-" {
                arrows.push(false);
            } else {
                return Err(PatternParseError::BadArrow { pos: arrow_pos });
            }
            pos += 2;
        }
        skip_ws(&mut pos);
        let label_pos = pos;
        let label = bytes
            .get(pos)
            .and_then(|b| Label::parse(std::str::from_utf8(&[*b]).unwrap_or("")))
            .ok_or(PatternParseError::BadLabel { pos: label_pos })?;
        pos += 1;

        if faces.iter().any(|(l, _)| *l == label) {
            return Err(classify_repeat(label, label_pos, &faces, &arrows));
        }
        faces.push((label, label_pos));
    }
    skip_ws(&mut pos);
    if pos != bytes.len() {
        return Err(PatternParseError::TrailingInput { pos });
    }

    let mut outcomes = [FaceOutcome::Stable; 4];
    for (i, forward) in arrows.iter().enumerate() {
        let (from, to) = if *forward {
            (faces[i].0, faces[i + 1].0)
        } else {
            (faces[i + 1].0, faces[i].0)
        };
        outcomes[from.index()] = FaceOutcome::TipsTo(to);
    }
    // Four distinct faces and three chain arrows always leave exactly one
    // stable face, so this cannot fail.
    Ok(FallingPattern::new(outcomes).expect("chain grammar yields a valid pattern"))
}

/// Distinguishes a repeated face that closes a successor loop (a cycle)
/// from a plain repetition.
fn classify_repeat(
    label: Label,
    pos: usize,
    faces: &[(Label, usize)],
    arrows: &[bool],
) -> PatternParseError {
    // Build the successor relation parsed so far, then append the pending
    // arrow into `label` and look for a loop back to it.
    let mut succ: Vec<(Label, Label)> = Vec::new();
    for (i, forward) in arrows
        .iter()
        .enumerate()
        .take(faces.len().saturating_sub(1))
    {
        let (from, to) = if *forward {
            (faces[i].0, faces[i + 1].0)
        } else {
            (faces[i + 1].0, faces[i].0)
        };
        succ.push((from, to));
    }
    if let Some(last_arrow) = arrows.last() {
        let prev = faces.last().unwrap().0;
        let (from, to) = if *last_arrow {
            (prev, label)
        } else {
            (label, prev)
        };
        succ.push((from, to));
    }
    let mut cur = label;
    for _ in 0..succ.len() + 1 {
        match succ.iter().find(|(f, _)| *f == cur) {
            Some((_, next)) => {
                if *next == label {
                    return PatternParseError::Cycle { face: label, pos };
                }
                cur = *next;
            }
            None => break,
        }
    }
    PatternParseError::DuplicateFace { face: label, pos }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Label::{A, B, C, D};

    #[test]
    fn parses_table_rows() {
        let p = parse_pattern("B->A->D<-C").unwrap();
        assert_eq!(p.successor(B), Some(A));
        assert_eq!(p.successor(A), Some(D));
        assert_eq!(p.successor(C), Some(D));
        assert_eq!(p.outcome(D), FaceOutcome::Stable);
        assert_eq!(p.stable_faces(), vec![D]);

        let p = parse_pattern("C->D->A->B").unwrap();
        assert_eq!(p.successor(C), Some(D));
        assert_eq!(p.successor(D), Some(A));
        assert_eq!(p.successor(A), Some(B));
        assert_eq!(p.stable_faces(), vec![B]);
    }

    #[test]
    fn cycle_is_rejected() {
        let e = parse_pattern("A->B->A<-C").unwrap_err();
        assert!(
            matches!(e, PatternParseError::Cycle { face: A, .. }),
            "{e:?}"
        );
    }

    #[test]
    fn plain_repeat_is_rejected() {
        let e = parse_pattern("A->B->C<-A").unwrap_err();
        assert!(
            matches!(e, PatternParseError::DuplicateFace { face: A, .. }),
            "{e:?}"
        );
    }

    #[test]
    fn bad_tokens_carry_positions() {
        assert_eq!(
            parse_pattern("X->B->C->D").unwrap_err(),
            PatternParseError::BadLabel { pos: 0 }
        );
        assert_eq!(
            parse_pattern("A=>B->C->D").unwrap_err(),
            PatternParseError::BadArrow { pos: 1 }
        );
        assert!(matches!(
            parse_pattern("A->B->C->D->").unwrap_err(),
            PatternParseError::TrailingInput { .. }
        ));
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "B->A->D<-C",
            "C->D->A<-B",
            "B->A->D->C",
            "C->D->A->B",
            "A->B->D<-C",
        ] {
            let p = parse_pattern(s).unwrap();
            assert_eq!(p.to_string(), s, "round trip of {s}");
            assert_eq!(parse_pattern(&p.to_string()).unwrap(), p);
        }
    }

    #[test]
    fn display_prefers_late_sink() {
        // Written backwards, the same pattern must still print with the sink
        // late in the chain.
        let p = parse_pattern("C->D<-A<-B").unwrap();
        assert_eq!(p.to_string(), "B->A->D<-C");
    }

    #[test]
    fn non_chain_patterns_print_as_verdicts() {
        let p = FallingPattern::new([
            FaceOutcome::TipsTo(D),
            FaceOutcome::TipsTo(D),
            FaceOutcome::TipsTo(D),
            FaceOutcome::Stable,
        ])
        .unwrap();
        assert_eq!(p.chain(), None);
        assert_eq!(p.to_string(), "A->D, B->D, C->D, D: stable");
    }

    #[test]
    fn whitespace_tolerated() {
        let p = parse_pattern("  B -> A -> D <- C ").unwrap();
        assert_eq!(p.to_string(), "B->A->D<-C");
    }
}
