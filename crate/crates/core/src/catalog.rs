//! Cayley-table files, canonical forms and exhaustive generation of small
//! commutative semigroups up to isomorphism.
//!
//! File format: the first significant line holds the order `n`, followed by
//! `n` rows of `n` space-separated entries. Lines starting with `#` and
//! blank lines are ignored anywhere.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::cayley::{CayleyError, ElementId, Semigroup};

/// Largest order accepted by [`canonical_form`].
pub const MAX_CANONICAL_ORDER: usize = 8;
/// Largest order accepted by [`generate_commutative`].
pub const MAX_GENERATED_ORDER: usize = 5;
/// Largest order accepted by [`brute_force_commutative`].
pub const MAX_BRUTE_FORCE_ORDER: usize = 4;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Invalid(#[from] CayleyError),
    #[error("order {order} exceeds the supported maximum {max}")]
    OrderTooLarge { order: usize, max: usize },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        source: Box<CatalogError>,
    },
}

impl CatalogError {
    fn syntax(line: usize, message: impl Into<String>) -> Self {
        CatalogError::Syntax {
            line,
            message: message.into(),
        }
    }

    /// True for errors caused by the content of an input table.
    pub fn is_validation(&self) -> bool {
        match self {
            CatalogError::Syntax { .. } | CatalogError::Invalid(_) => true,
            CatalogError::File { source, .. } => source.is_validation(),
            CatalogError::Io { .. } | CatalogError::OrderTooLarge { .. } => false,
        }
    }
}

/// Lexicographically least row-major table over all relabelings.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    order: usize,
    bytes: Vec<u8>,
}

impl CanonicalForm {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// The canonical table itself.
    pub fn semigroup(&self) -> Semigroup {
        Semigroup::from_flat(self.order, self.bytes.iter().map(|&b| b as usize).collect())
            .expect("canonical forms are built from valid tables")
    }

    /// First 16 hex digits of the SHA-256 of the canonical bytes.
    pub fn short_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update([self.order as u8]);
        hasher.update(&self.bytes);
        hex::encode(&hasher.finalize()[..8])
    }
}

/// Renders as `n:` followed by the table digits, e.g. `2:0110`.
impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.order)?;
        for b in &self.bytes {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({self})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Generated,
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub semigroup: Semigroup,
    pub canonical: CanonicalForm,
    pub source: Source,
}

impl CatalogEntry {
    pub fn new(semigroup: Semigroup, source: Source) -> Result<Self, CatalogError> {
        let canonical = canonical_form(&semigroup)?;
        Ok(CatalogEntry {
            semigroup,
            canonical,
            source,
        })
    }
}

pub fn parse(text: &str) -> Result<Semigroup, CatalogError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (first, header) = lines
        .next()
        .ok_or_else(|| CatalogError::syntax(1, "missing order line"))?;
    let order: usize = header.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CatalogError::syntax(
            first,
            format!("expected a positive order, found {header:?}"),
        )
    })?;
    let mut rows: Vec<Vec<i64>> = Vec::with_capacity(order);
    for (line, content) in lines {
        if rows.len() == order {
            return Err(CatalogError::syntax(
                line,
                "unexpected content after the table",
            ));
        }
        let row = content
            .split_whitespace()
            .map(|tok| {
                tok.parse::<i64>()
                    .map_err(|_| CatalogError::syntax(line, format!("invalid entry {tok:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != order {
            return Err(CatalogError::syntax(
                line,
                format!("expected {order} entries, found {}", row.len()),
            ));
        }
        rows.push(row);
    }
    if rows.len() < order {
        let last = text.lines().count().max(1);
        return Err(CatalogError::syntax(
            last,
            format!("expected {order} rows, found {}", rows.len()),
        ));
    }
    Ok(Semigroup::from_rows(&rows)?)
}

pub fn serialize(s: &Semigroup) -> String {
    let mut out = format!("{}\n", s.order());
    for row in s.rows() {
        let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_file(path: &Path) -> Result<Semigroup, CatalogError> {
    let text = std::fs::read_to_string(path).map_err(|source| CatalogError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse(&text).map_err(|e| CatalogError::File {
        path: path.to_path_buf(),
        source: Box::new(e),
    })
}

pub fn canonical_form(s: &Semigroup) -> Result<CanonicalForm, CatalogError> {
    let n = s.order();
    if n > MAX_CANONICAL_ORDER {
        return Err(CatalogError::OrderTooLarge {
            order: n,
            max: MAX_CANONICAL_ORDER,
        });
    }
    let mut best: Option<Vec<u8>> = None;
    let mut scratch = vec![0u8; n * n];
    // order[i] is the old element placed at new position i
    let mut order: Vec<ElementId> = (0..n).collect();
    let mut position = vec![0usize; n];
    for_each_permutation(&mut order, 0, &mut |order| {
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        for i in 0..n {
            for j in 0..n {
                scratch[i * n + j] = position[s.add(order[i], order[j])] as u8;
            }
        }
        if best.as_ref().is_none_or(|b| scratch < *b) {
            best = Some(scratch.clone());
        }
    });
    Ok(CanonicalForm {
        order: n,
        bytes: best.expect("at least one permutation"),
    })
}

fn for_each_permutation(items: &mut [usize], k: usize, f: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        for_each_permutation(items, k + 1, f);
        items.swap(k, i);
    }
}

fn dedup(tables: impl IntoIterator<Item = Semigroup>) -> Result<Vec<CatalogEntry>, CatalogError> {
    let mut classes = BTreeSet::new();
    for s in tables {
        classes.insert(canonical_form(&s)?);
    }
    Ok(classes
        .into_iter()
        .map(|canonical| CatalogEntry {
            semigroup: canonical.semigroup(),
            canonical,
            source: Source::Generated,
        })
        .collect())
}

/// One representative per isomorphism class of commutative semigroups of
/// order `n`, as canonical tables sorted by canonical form.
pub fn generate_commutative(n: usize) -> Result<Vec<CatalogEntry>, CatalogError> {
    if n == 0 || n > MAX_GENERATED_ORDER {
        return Err(CatalogError::OrderTooLarge {
            order: n,
            max: MAX_GENERATED_ORDER,
        });
    }
    let mut found = Vec::new();
    let mut table = vec![UNSET; n * n];
    let cells = generation_cells(n);
    backtrack(n, &cells, 0, &mut table, &mut found);
    dedup(found)
}

const UNSET: usize = usize::MAX;

/// Diagonal first, then the strict upper triangle in row-major order.
fn generation_cells(n: usize) -> Vec<(usize, usize)> {
    let mut cells: Vec<(usize, usize)> = (0..n).map(|i| (i, i)).collect();
    for i in 0..n {
        for j in i + 1..n {
            cells.push((i, j));
        }
    }
    cells
}

fn backtrack(
    n: usize,
    cells: &[(usize, usize)],
    next: usize,
    table: &mut [usize],
    found: &mut Vec<Semigroup>,
) {
    let Some(&(i, j)) = cells.get(next) else {
        found.push(Semigroup::from_flat(n, table.to_vec()).expect("pruned tables are associative"));
        return;
    };
    for v in 0..n {
        table[i * n + j] = v;
        table[j * n + i] = v;
        if associative_so_far(n, table) {
            backtrack(n, cells, next + 1, table, found);
        }
    }
    table[i * n + j] = UNSET;
    table[j * n + i] = UNSET;
}

/// Checks every triple whose evaluation is fully defined. Violations not
/// involving cell `{i, j}` were already rejected when their last cell was set.
fn associative_so_far(n: usize, table: &[usize]) -> bool {
    let get = |a: usize, b: usize| {
        if a == UNSET || b == UNSET {
            UNSET
        } else {
            table[a * n + b]
        }
    };
    (0..n).all(|a| {
        (0..n).all(|b| {
            let ab = get(a, b);
            (0..n).all(|c| {
                let left = get(ab, c);
                let right = get(a, get(b, c));
                left == UNSET || right == UNSET || left == right
            })
        })
    })
}

/// Same classes as [`generate_commutative`], computed by validating every
/// symmetric table. Only for cross-checking at tiny orders.
pub fn brute_force_commutative(n: usize) -> Result<Vec<CatalogEntry>, CatalogError> {
    if n == 0 || n > MAX_BRUTE_FORCE_ORDER {
        return Err(CatalogError::OrderTooLarge {
            order: n,
            max: MAX_BRUTE_FORCE_ORDER,
        });
    }
    let cells = generation_cells(n);
    let total = n.pow(cells.len() as u32);
    let mut valid = Vec::new();
    let mut table = vec![0; n * n];
    for code in 0..total {
        let mut rest = code;
        for &(i, j) in &cells {
            table[i * n + j] = rest % n;
            table[j * n + i] = rest % n;
            rest /= n;
        }
        if let Ok(s) = Semigroup::from_flat(n, table.clone()) {
            valid.push(s);
        }
    }
    dedup(valid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::fixtures::*;

    #[test]
    fn parses_examples() {
        assert_eq!(parse("1\n0\n").unwrap(), z1());
        assert_eq!(parse("2\n0 1\n1 0\n").unwrap(), c2());
        assert!(matches!(
            parse("2\n0 1\n0 0\n"),
            Err(CatalogError::Invalid(CayleyError::NotCommutative {
                i: 0,
                j: 1
            }))
        ));
    }

    #[test]
    fn parse_skips_comments_and_blank_lines() {
        let text = "# null semigroup\n\n2\n# rows\n1 1\n\n1 1";
        assert_eq!(parse(text).unwrap(), n2());
    }

    #[test]
    fn parse_reports_line_numbers() {
        let line_of = |text: &str| match parse(text) {
            Err(CatalogError::Syntax { line, .. }) => line,
            other => panic!("expected syntax error, got {other:?}"),
        };
        assert_eq!(line_of("x\n"), 1);
        assert_eq!(line_of("0\n"), 1);
        assert_eq!(line_of("2\n0 1\n1 0 1\n"), 3);
        assert_eq!(line_of("2\n0 1\n1 z\n"), 3);
        assert_eq!(line_of("2\n0 1\n1 0\n0 0\n"), 4);
        assert_eq!(line_of("# only\n2\n0 1\n"), 3);
        assert_eq!(line_of(""), 1);
        assert!(matches!(
            parse("2\n0 2\n2 0\n"),
            Err(CatalogError::Invalid(CayleyError::EntryOutOfRange { .. }))
        ));
    }

    #[test]
    fn serialize_is_bit_exact() {
        assert_eq!(serialize(&e3()), "3\n0 1 2\n1 0 2\n2 2 2\n");
        assert_eq!(parse(&serialize(&m3())).unwrap(), m3());
    }

    #[test]
    fn canonical_forms_identify_isomorphic_tables() {
        let swapped = c2().relabel(&[1, 0]);
        assert_ne!(swapped, c2());
        assert_eq!(
            canonical_form(&swapped).unwrap(),
            canonical_form(&c2()).unwrap()
        );
        assert_ne!(
            canonical_form(&n2()).unwrap(),
            canonical_form(&sl2()).unwrap()
        );
        let c3_form = canonical_form(&c3()).unwrap();
        let mut perm = vec![0, 1, 2];
        for_each_permutation(&mut perm, 0, &mut |p| {
            assert_eq!(canonical_form(&c3().relabel(p)).unwrap(), c3_form);
        });
        let big = Semigroup::cyclic(9);
        assert!(matches!(
            canonical_form(&big),
            Err(CatalogError::OrderTooLarge { order: 9, .. })
        ));
    }

    #[test]
    fn canonical_semigroup_is_isomorphic_to_input() {
        let form = canonical_form(&m3()).unwrap();
        assert_eq!(canonical_form(&form.semigroup()).unwrap(), form);
        assert_eq!(form.short_hash().len(), 16);
    }

    #[test]
    fn small_catalogs() {
        assert_eq!(generate_commutative(1).unwrap().len(), 1);
        let two = generate_commutative(2).unwrap();
        assert_eq!(two.len(), 3);
        let forms: Vec<_> = [n2(), sl2(), c2()]
            .iter()
            .map(|s| canonical_form(s).unwrap())
            .collect();
        for entry in &two {
            assert!(forms.contains(&entry.canonical));
            assert_eq!(entry.source, Source::Generated);
        }
        assert!(generate_commutative(6).is_err());
        assert!(generate_commutative(0).is_err());
    }

    #[test]
    fn generator_matches_brute_force_up_to_three() {
        for n in 1..=3 {
            let generated = generate_commutative(n).unwrap();
            let brute = brute_force_commutative(n).unwrap();
            assert_eq!(generated, brute, "order {n}");
        }
    }
}
