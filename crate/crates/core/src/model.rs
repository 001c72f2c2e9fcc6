//! Instances, orderings and the PACE 2024 one-sided crossing text format.
//!
//! Free vertices are stored 0-based. The PACE label of free vertex `i` is
//! `n0 + 1 + i` and only appears when reading or writing text.

use std::fmt::Write as _;

use crate::{Error, Result};

/// A bipartite graph with fixed layer `A = 1..=n0` and free layer `B`.
///
/// `adjacency[b]` lists the A-positions adjacent to free vertex `b` in strictly
/// ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    n0: usize,
    adjacency: Vec<Vec<usize>>,
    m: usize,
}

impl Instance {
    /// Builds an instance from per-vertex neighbor lists. The lists are sorted
    /// here; out-of-range positions and repeated neighbors are rejected.
    pub fn new(n0: usize, mut adjacency: Vec<Vec<usize>>) -> Result<Self> {
        for (b, nbrs) in adjacency.iter_mut().enumerate() {
            nbrs.sort_unstable();
            if let Some(&a) = nbrs.iter().find(|&&a| a == 0 || a > n0) {
                return Err(Error::InvalidAdjacency {
                    vertex: b,
                    reason: format!("position {a} outside 1..={n0}"),
                });
            }
            if let Some(w) = nbrs.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidAdjacency {
                    vertex: b,
                    reason: format!("position {} repeated", w[0]),
                });
            }
        }
        let m = adjacency.iter().map(Vec::len).sum();
        Ok(Self { n0, adjacency, m })
    }

    pub fn empty() -> Self {
        Self {
            n0: 0,
            adjacency: Vec::new(),
            m: 0,
        }
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn n1(&self) -> usize {
        self.adjacency.len()
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, b: usize) -> &[usize] {
        &self.adjacency[b]
    }

    pub fn degree(&self, b: usize) -> usize {
        self.adjacency[b].len()
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    /// PACE label of free vertex `b`.
    pub fn label(&self, b: usize) -> usize {
        self.n0 + 1 + b
    }

    /// Sub-instance induced by the given free vertices, in the given order.
    /// The fixed layer is kept unchanged.
    pub fn induced(&self, members: &[usize]) -> Instance {
        let adjacency: Vec<Vec<usize>> =
            members.iter().map(|&b| self.adjacency[b].clone()).collect();
        let m = adjacency.iter().map(Vec::len).sum();
        Instance {
            n0: self.n0,
            adjacency,
            m,
        }
    }
}

/// A left-to-right order of the free vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ordering(Vec<usize>);

impl Ordering {
    /// Checks that `perm` is a permutation of `0..perm.len()`.
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &v in &perm {
            if v >= n {
                return Err(Error::InvalidOrdering {
                    n,
                    reason: format!("entry {v} out of range"),
                });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidOrdering {
                    n,
                    reason: format!("entry {v} repeated"),
                });
            }
        }
        Ok(Self(perm))
    }

    /// Like [`Ordering::new`] but also checks the length against `n1`.
    pub fn for_size(perm: Vec<usize>, n1: usize) -> Result<Self> {
        if perm.len() != n1 {
            return Err(Error::DimensionMismatch {
                expected: n1,
                found: perm.len(),
            });
        }
        Self::new(perm)
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    /// `positions()[v]` is the index of `v` in the order.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }
}

/// An ordering together with its crossing count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub ordering: Ordering,
    pub crossings: u64,
}

impl Solution {
    pub fn empty() -> Self {
        Self {
            ordering: Ordering::identity(0),
            crossings: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("no `p ocr` header line found")]
    MissingHeader,
    #[error("line {line}: malformed header")]
    MalformedHeader { line: usize },
    #[error("line {line}: second header line")]
    DuplicateHeader { line: usize },
    #[error("line {line}: edge line before header")]
    EdgeBeforeHeader { line: usize },
    #[error("line {line}: malformed edge line")]
    MalformedEdge { line: usize },
    #[error("line {line}: edge ({a}, {b}) has a label out of range")]
    LabelOutOfRange { line: usize, a: usize, b: usize },
    #[error("line {line}: header announces {expected} edges but {found} were given")]
    EdgeCountMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: duplicate edge ({a}, {b})")]
    DuplicateEdge { line: usize, a: usize, b: usize },
    #[error("line {line}: `{text}` is not a free-vertex label")]
    BadSolutionLabel { line: usize, text: String },
    #[error("line {line}: label {label} listed twice")]
    RepeatedSolutionLabel { line: usize, label: usize },
    #[error("solution lists {found} labels, expected {expected}")]
    SolutionLength { expected: usize, found: usize },
}

fn parse_usize(tok: &str) -> Option<usize> {
    tok.parse().ok()
}

/// Parses a PACE `p ocr` instance.
///
/// Comment lines starting with `c` and blank lines are skipped anywhere. The
/// header may carry a trailing fifth field (the cutwidth of the parameterized
/// track), which is ignored.
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut adjacency: Vec<Vec<usize>> = Vec::new();
    let mut found = 0usize;
    let mut last_line = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let toks: Vec<&str> = trimmed.split_whitespace().collect();
        if toks[0] == "p" {
            if header.is_some() {
                return Err(ParseError::DuplicateHeader { line });
            }
            if !(toks.len() == 5 || toks.len() == 6) || toks[1] != "ocr" {
                return Err(ParseError::MalformedHeader { line });
            }
            let nums: Option<Vec<usize>> = toks[2..].iter().map(|t| parse_usize(t)).collect();
            let nums = nums.ok_or(ParseError::MalformedHeader { line })?;
            header = Some((nums[0], nums[1], nums[2]));
            adjacency = vec![Vec::new(); nums[1]];
            continue;
        }
        let Some((n0, n1, m)) = header else {
            return Err(ParseError::EdgeBeforeHeader { line });
        };
        if toks.len() != 2 {
            return Err(ParseError::MalformedEdge { line });
        }
        let (Some(a), Some(b)) = (parse_usize(toks[0]), parse_usize(toks[1])) else {
            return Err(ParseError::MalformedEdge { line });
        };
        if a == 0 || a > n0 || b <= n0 || b > n0 + n1 {
            return Err(ParseError::LabelOutOfRange { line, a, b });
        }
        found += 1;
        if found > m {
            return Err(ParseError::EdgeCountMismatch {
                line,
                expected: m,
                found,
            });
        }
        let nbrs = &mut adjacency[b - n0 - 1];
        match nbrs.binary_search(&a) {
            Ok(_) => return Err(ParseError::DuplicateEdge { line, a, b }),
            Err(pos) => nbrs.insert(pos, a),
        }
    }

    let (n0, _, m) = header.ok_or(ParseError::MissingHeader)?;
    if found != m {
        return Err(ParseError::EdgeCountMismatch {
            line: last_line,
            expected: m,
            found,
        });
    }
    Ok(Instance { n0, adjacency, m })
}

/// Serializes an instance in PACE format, edges grouped by free vertex.
pub fn write_instance(instance: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "p ocr {} {} {}",
        instance.n0(),
        instance.n1(),
        instance.m()
    );
    for b in 0..instance.n1() {
        for &a in instance.neighbors(b) {
            let _ = writeln!(out, "{} {}", a, instance.label(b));
        }
    }
    out
}

/// Writes one free-vertex label per line, leftmost first.
pub fn write_solution(instance: &Instance, ordering: &Ordering) -> Result<String> {
    let ordering = Ordering::for_size(ordering.as_slice().to_vec(), instance.n1())?;
    let mut out = String::with_capacity(ordering.len() * 8);
    for b in ordering.iter() {
        let _ = writeln!(out, "{}", instance.label(b));
    }
    Ok(out)
}

/// Reads a PACE solution (one label per line) back into an [`Ordering`].
pub fn parse_solution(instance: &Instance, text: &str) -> Result<Ordering, ParseError> {
    let n0 = instance.n0();
    let n1 = instance.n1();
    let mut seen = vec![false; n1];
    let mut perm = Vec::with_capacity(n1);
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let label = parse_usize(trimmed)
            .filter(|&l| l > n0 && l <= n0 + n1)
            .ok_or_else(|| ParseError::BadSolutionLabel {
                line,
                text: trimmed.to_string(),
            })?;
        let b = label - n0 - 1;
        if std::mem::replace(&mut seen[b], true) {
            return Err(ParseError::RepeatedSolutionLabel { line, label });
        }
        perm.push(b);
    }
    if perm.len() != n1 {
        return Err(ParseError::SolutionLength {
            expected: n1,
            found: perm.len(),
        });
    }
    Ok(Ordering(perm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) const FIG1: &str = "p ocr 4 2 6\n1 5\n3 5\n4 5\n2 6\n3 6\n4 6\n";

    #[test]
    fn parses_example_instance() {
        let inst = parse_instance(FIG1).unwrap();
        assert_eq!(inst.n0(), 4);
        assert_eq!(inst.n1(), 2);
        assert_eq!(inst.m(), 6);
        assert_eq!(inst.neighbors(0), &[1, 3, 4]);
        assert_eq!(inst.neighbors(1), &[2, 3, 4]);
    }

    #[test]
    fn parses_empty_instance() {
        let inst = parse_instance("p ocr 0 0 0\n").unwrap();
        assert_eq!((inst.n0(), inst.n1(), inst.m()), (0, 0, 0));
    }

    #[test]
    fn edges_sorted_regardless_of_file_order() {
        let inst = parse_instance("c hello\np ocr 3 1 3\n3 4\nc mid\n1 4\n2 4\n").unwrap();
        assert_eq!(inst.neighbors(0), &[1, 2, 3]);
    }

    #[test]
    fn accepts_cutwidth_header() {
        let inst = parse_instance("p ocr 2 1 1 1\n1 3\n").unwrap();
        assert_eq!(inst.m(), 1);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            parse_instance("p ocr 2 1 2\n1 3\n1 3\n"),
            Err(ParseError::DuplicateEdge {
                line: 3,
                a: 1,
                b: 3
            })
        );
        assert_eq!(parse_instance(""), Err(ParseError::MissingHeader));
        assert_eq!(
            parse_instance("p ocr 2 x 2\n"),
            Err(ParseError::MalformedHeader { line: 1 })
        );
        assert_eq!(
            parse_instance("p tw 2 1 2\n"),
            Err(ParseError::MalformedHeader { line: 1 })
        );
        assert_eq!(
            parse_instance("p ocr 1 1 0\np ocr 1 1 0\n"),
            Err(ParseError::DuplicateHeader { line: 2 })
        );
        assert_eq!(
            parse_instance("1 2\np ocr 1 1 1\n"),
            Err(ParseError::EdgeBeforeHeader { line: 1 })
        );
        assert_eq!(
            parse_instance("p ocr 2 1 1\n3 3\n"),
            Err(ParseError::LabelOutOfRange {
                line: 2,
                a: 3,
                b: 3
            })
        );
        assert_eq!(
            parse_instance("p ocr 2 1 1\n1 2\n"),
            Err(ParseError::LabelOutOfRange {
                line: 2,
                a: 1,
                b: 2
            })
        );
        assert_eq!(
            parse_instance("p ocr 2 1 1\n1\n"),
            Err(ParseError::MalformedEdge { line: 2 })
        );
        assert_eq!(
            parse_instance("p ocr 2 1 2\n1 3\n"),
            Err(ParseError::EdgeCountMismatch {
                line: 2,
                expected: 2,
                found: 1
            })
        );
        assert_eq!(
            parse_instance("p ocr 2 1 1\n1 3\n2 3\n"),
            Err(ParseError::EdgeCountMismatch {
                line: 3,
                expected: 1,
                found: 2
            })
        );
    }

    #[test]
    fn writes_solutions() {
        let fig1 = parse_instance(FIG1).unwrap();
        let out = write_solution(&fig1, &Ordering::new(vec![0, 1]).unwrap()).unwrap();
        assert_eq!(out, "5\n6\n");

        let empty = Instance::new(3, vec![]).unwrap();
        assert_eq!(write_solution(&empty, &Ordering::identity(0)).unwrap(), "");

        let two = Instance::new(2, vec![vec![1], vec![2]]).unwrap();
        let out = write_solution(&two, &Ordering::new(vec![1, 0]).unwrap()).unwrap();
        assert_eq!(out, "4\n3\n");

        assert!(write_solution(&two, &Ordering::identity(3)).is_err());
    }

    #[test]
    fn ordering_rejects_non_permutations() {
        assert!(Ordering::new(vec![0, 0]).is_err());
        assert!(Ordering::new(vec![0, 2]).is_err());
        assert!(Ordering::new(vec![1, 0, 2]).is_ok());
    }

    #[test]
    fn solution_text_round_trip_and_errors() {
        let fig1 = parse_instance(FIG1).unwrap();
        assert_eq!(parse_solution(&fig1, "6\n5\n").unwrap().as_slice(), &[1, 0]);
        assert!(matches!(
            parse_solution(&fig1, "5\n5\n"),
            Err(ParseError::RepeatedSolutionLabel { line: 2, label: 5 })
        ));
        assert!(matches!(
            parse_solution(&fig1, "5\n"),
            Err(ParseError::SolutionLength { .. })
        ));
        assert!(matches!(
            parse_solution(&fig1, "4\n5\n"),
            Err(ParseError::BadSolutionLabel { line: 1, .. })
        ));
    }

    fn arb_instance() -> impl Strategy<Value = Instance> {
        (0usize..=50, 0usize..=50).prop_flat_map(|(n0, n1)| {
            let row = proptest::collection::btree_set(1..=n0.max(1), 0..=n0.min(12));
            proptest::collection::vec(row, n1).prop_map(move |rows| {
                let adjacency = rows
                    .into_iter()
                    .map(|s| {
                        if n0 == 0 {
                            Vec::new()
                        } else {
                            s.into_iter().collect()
                        }
                    })
                    .collect();
                Instance::new(n0, adjacency).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn pace_round_trip(inst in arb_instance()) {
            let text = write_instance(&inst);
            prop_assert_eq!(parse_instance(&text).unwrap(), inst);
        }
    }
}
