//! Per-semigroup analysis and catalog-wide verification of the zero-sum
//! theorems and conjectures.

use std::collections::HashMap;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{self, CanonicalForm, CatalogEntry, CatalogError, Source};
use crate::cayley::{ElementId, Semigroup};
use crate::decomposition as dec;
use crate::green;
use crate::sequence::Sequence;
use crate::zerosum::{self, EgzValue};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest order at which the Rees check walks every ideal; above it only
/// principal ideals are used.
pub const EXHAUSTIVE_IDEAL_ORDER: usize = 3;

/// Checkable statements. Everything except the two conjectures is a proven
/// theorem, so a failure there is an implementation bug.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ClaimId {
    /// `D(S) = d(S) + 1`.
    #[serde(rename = "C-PROP2")]
    Prop2,
    /// `E(S) ≤ D(S) + κ(S) − 1` for every semigroup (open).
    #[serde(rename = "C-CONJ4")]
    Conj4,
    /// `E(S) = D(S) + κ(S) − 1` for monoids (open).
    #[serde(rename = "C-CONJ5")]
    Conj5,
    /// The conjectured bound for group-free semigroups.
    #[serde(rename = "C-GF")]
    GroupFree,
    /// The conjectured bound for nilsemigroups.
    #[serde(rename = "C-NIL")]
    Nil,
    /// Equality in the bound for elementary semigroups.
    #[serde(rename = "C-ELEM")]
    Elementary,
    /// `E(S) ≤ D(S) + κ(S)` for archimedean semigroups.
    #[serde(rename = "C-ARCH")]
    Archimedean,
    /// The conjectured bound for archimedean `S` with `L(S/K) ≤ 3`.
    #[serde(rename = "C-ARCH3")]
    Archimedean3,
    /// `D(S) ≥ D(S/I)` for ideals `I`.
    #[serde(rename = "C-REES")]
    Rees,
    /// `L(N) ≤ D(N) ≤ L(N) + 1` for nilsemigroups.
    #[serde(rename = "C-LNIL")]
    NilIndex,
    /// `H` is equality on group-free semigroups.
    #[serde(rename = "C-GREEN")]
    GreenEquality,
    /// `S/H` is group-free.
    #[serde(rename = "C-PROPC")]
    QuotientGroupFree,
    /// `a <_H b` implies `∞:b ⊊ ∞:a` in nilsemigroups.
    #[serde(rename = "C-ANN")]
    Annihilator,
    /// Units permute each class of equal annihilators.
    #[serde(rename = "C-ACT")]
    UnitAction,
    /// `a + b = a` implies `a = ∞` in nilsemigroups.
    #[serde(rename = "C-ADDNIL")]
    NilAddition,
    /// The explicit sequence certifying `E(S) ≥ D(S) + κ(S) − 1` in monoids.
    #[serde(rename = "C-MONLB")]
    MonoidLowerBound,
}

impl ClaimId {
    pub const ALL: [ClaimId; 16] = [
        ClaimId::Prop2,
        ClaimId::Conj4,
        ClaimId::Conj5,
        ClaimId::GroupFree,
        ClaimId::Nil,
        ClaimId::Elementary,
        ClaimId::Archimedean,
        ClaimId::Archimedean3,
        ClaimId::Rees,
        ClaimId::NilIndex,
        ClaimId::GreenEquality,
        ClaimId::QuotientGroupFree,
        ClaimId::Annihilator,
        ClaimId::UnitAction,
        ClaimId::NilAddition,
        ClaimId::MonoidLowerBound,
    ];

    pub fn code(self) -> &'static str {
        match self {
            ClaimId::Prop2 => "C-PROP2",
            ClaimId::Conj4 => "C-CONJ4",
            ClaimId::Conj5 => "C-CONJ5",
            ClaimId::GroupFree => "C-GF",
            ClaimId::Nil => "C-NIL",
            ClaimId::Elementary => "C-ELEM",
            ClaimId::Archimedean => "C-ARCH",
            ClaimId::Archimedean3 => "C-ARCH3",
            ClaimId::Rees => "C-REES",
            ClaimId::NilIndex => "C-LNIL",
            ClaimId::GreenEquality => "C-GREEN",
            ClaimId::QuotientGroupFree => "C-PROPC",
            ClaimId::Annihilator => "C-ANN",
            ClaimId::UnitAction => "C-ACT",
            ClaimId::NilAddition => "C-ADDNIL",
            ClaimId::MonoidLowerBound => "C-MONLB",
        }
    }

    pub fn is_conjecture(self) -> bool {
        matches!(self, ClaimId::Conj4 | ClaimId::Conj5)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimVerdict {
    pub claim: ClaimId,
    pub applicable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl ClaimVerdict {
    fn not_applicable(claim: ClaimId) -> Self {
        ClaimVerdict {
            claim,
            applicable: false,
            holds: None,
            witness: None,
        }
    }

    fn checked(claim: ClaimId, failure: Option<String>) -> Self {
        ClaimVerdict {
            claim,
            applicable: true,
            holds: Some(failure.is_none()),
            witness: failure,
        }
    }

    pub fn failed(&self) -> bool {
        self.holds == Some(false)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub group_free: bool,
    pub nil: bool,
    pub archimedean: bool,
    pub elementary: bool,
    pub monoid: bool,
    pub group: bool,
}

impl Flags {
    pub fn names(&self) -> Vec<&'static str> {
        [
            (self.group_free, "group_free"),
            (self.nil, "nil"),
            (self.archimedean, "archimedean"),
            (self.elementary, "elementary"),
            (self.monoid, "monoid"),
            (self.group, "group"),
        ]
        .into_iter()
        .filter_map(|(on, name)| on.then_some(name))
        .collect()
    }
}

/// Everything computed for one semigroup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub order: usize,
    pub canonical: Option<String>,
    pub exp: usize,
    pub kappa: usize,
    pub small_d: usize,
    pub big_d: usize,
    pub egz: EgzValue,
    pub cap: usize,
    pub nilpotency_index: Option<usize>,
    pub kernel_quotient_nilpotency_index: Option<usize>,
    pub flags: Flags,
    pub checks: Vec<ClaimVerdict>,
}

impl InvariantReport {
    pub fn verdict(&self, claim: ClaimId) -> &ClaimVerdict {
        self.checks
            .iter()
            .find(|v| v.claim == claim)
            .expect("every claim has a verdict")
    }

    pub fn theorem_failures(&self) -> usize {
        self.checks
            .iter()
            .filter(|v| v.failed() && !v.claim.is_conjecture())
            .count()
    }

    pub fn conjecture_failures(&self) -> usize {
        self.checks
            .iter()
            .filter(|v| v.failed() && v.claim.is_conjecture())
            .count()
    }
}

/// Default search cap for `E(S)`: `D(S) + κ(S) + 2`.
pub fn default_cap(big_d: usize, kappa: usize) -> usize {
    big_d + kappa + 2
}

/// Memoized "is there a length-`len` sequence without a balanced
/// subsequence" queries for a fixed semigroup and gap `κ`.
struct Unbalanced<'a> {
    s: &'a Semigroup,
    kappa: usize,
    cache: HashMap<usize, Option<Sequence>>,
}

impl<'a> Unbalanced<'a> {
    fn at(&mut self, len: usize) -> Option<Sequence> {
        let (s, kappa) = (self.s, self.kappa);
        self.cache
            .entry(len)
            .or_insert_with(|| zerosum::first_unbalanced(s, len, kappa))
            .clone()
    }

    /// `E(S) ≤ bound`, with a counterexample of length `bound` otherwise.
    fn upper_bound(&mut self, bound: usize) -> Option<String> {
        self.at(bound)
            .map(|seq| format!("length-{bound} sequence {seq} has no balanced subsequence"))
    }

    /// `E(S) = bound`.
    fn equality(&mut self, bound: usize) -> Option<String> {
        if let Some(failure) = self.upper_bound(bound) {
            return Some(failure);
        }
        if bound == 0 || self.at(bound - 1).is_none() {
            return Some(format!(
                "every sequence of length {} is balanced",
                bound.saturating_sub(1)
            ));
        }
        None
    }
}

/// Computes invariants, classification flags and every applicable claim.
/// `cap` bounds the `E(S)` search and defaults to [`default_cap`].
pub fn analyze(s: &Semigroup, cap: Option<usize>) -> InvariantReport {
    let canonical = catalog::canonical_form(s).ok().map(|c| c.to_string());
    let irreducible = zerosum::enumerate_irreducible(s);
    let longest = irreducible.iter().max_by_key(|q| q.len()).cloned();
    let big_d = longest.as_ref().map_or(0, Sequence::len) + 1;
    let small_d = zerosum::small_davenport(s);
    let exp = s.exponent();
    let kappa = zerosum::kappa(s);
    let cap = cap.unwrap_or_else(|| default_cap(big_d, kappa));
    let identity = s.identity();
    let start = if identity.is_some() {
        big_d + kappa - 1
    } else {
        kappa
    };
    let egz = zerosum::egz_search(s, kappa, start, cap);

    let nilpotency_index = dec::nilpotency(s);
    let archimedean = dec::archimedean_data(s).ok();
    let split = dec::elementary_split(s);
    let flags = Flags {
        group_free: green::is_group_free(s),
        nil: nilpotency_index.is_some(),
        archimedean: archimedean.is_some(),
        elementary: split.is_some(),
        monoid: identity.is_some(),
        group: s.is_group(),
    };

    let mut unbalanced = Unbalanced {
        s,
        kappa,
        cache: HashMap::new(),
    };
    let conjectured = big_d + kappa - 1;
    let mut checks = Vec::with_capacity(ClaimId::ALL.len());
    let mut push = |claim: ClaimId, applicable: bool, check: &mut dyn FnMut() -> Option<String>| {
        checks.push(if applicable {
            ClaimVerdict::checked(claim, check())
        } else {
            ClaimVerdict::not_applicable(claim)
        });
    };

    push(ClaimId::Prop2, true, &mut || {
        (big_d != small_d + 1).then(|| format!("D = {big_d}, d = {small_d}"))
    });
    push(ClaimId::Conj4, true, &mut || {
        unbalanced.upper_bound(conjectured)
    });
    push(ClaimId::Conj5, flags.monoid, &mut || {
        unbalanced.equality(conjectured)
    });
    push(ClaimId::GroupFree, flags.group_free, &mut || {
        unbalanced.upper_bound(conjectured)
    });
    push(ClaimId::Nil, flags.nil, &mut || {
        unbalanced.upper_bound(conjectured)
    });
    push(ClaimId::Elementary, flags.elementary, &mut || {
        unbalanced.equality(conjectured)
    });
    push(ClaimId::Archimedean, flags.archimedean, &mut || {
        unbalanced.upper_bound(big_d + kappa)
    });
    let small_quotient_index = archimedean
        .as_ref()
        .is_some_and(|a| a.nilpotency_index_of_quotient <= 3);
    push(ClaimId::Archimedean3, small_quotient_index, &mut || {
        unbalanced.upper_bound(conjectured)
    });
    push(ClaimId::Rees, true, &mut || check_rees(s, big_d));
    push(ClaimId::NilIndex, flags.nil, &mut || {
        let l = nilpotency_index.expect("nil flag implies an index");
        (!(l <= big_d && big_d <= l + 1)).then(|| format!("L = {l}, D = {big_d}"))
    });
    push(ClaimId::GreenEquality, flags.group_free, &mut || {
        let classes = green::green_classes(s);
        (!classes.is_discrete()).then(|| format!("H-classes {:?}", classes.classes()))
    });
    push(
        ClaimId::QuotientGroupFree,
        true,
        &mut || match green::quotient_green(s) {
            Ok(q) if green::is_group_free(&q.target) => None,
            Ok(q) => Some(format!(
                "S/H = {:?} has exponent {}",
                q.target,
                q.target.exponent()
            )),
            Err(e) => Some(e.to_string()),
        },
    );
    push(ClaimId::Annihilator, flags.nil, &mut || {
        check_annihilators(s)
    });
    push(ClaimId::UnitAction, flags.elementary, &mut || {
        check_unit_action(s, split.as_ref().expect("elementary flag implies a split"))
    });
    push(ClaimId::NilAddition, flags.nil, &mut || {
        check_nil_addition(s)
    });
    push(ClaimId::MonoidLowerBound, flags.monoid, &mut || {
        let identity = identity.expect("monoid flag implies an identity");
        let longest = longest
            .clone()
            .unwrap_or_else(|| Sequence::empty(s.order()));
        match zerosum::monoid_lower_bound_from(s, identity, longest) {
            Ok(lb) if lb.bound == conjectured => None,
            Ok(lb) => Some(format!(
                "bound {} differs from D + κ − 1 = {conjectured}",
                lb.bound
            )),
            Err(e) => Some(e.to_string()),
        }
    });

    InvariantReport {
        order: s.order(),
        canonical,
        exp,
        kappa,
        small_d,
        big_d,
        egz,
        cap,
        nilpotency_index,
        kernel_quotient_nilpotency_index: archimedean.map(|a| a.nilpotency_index_of_quotient),
        flags,
        checks,
    }
}

/// Ideals used by the Rees check: all of them at small orders, principal
/// ideals `a + S⁰` otherwise.
pub fn rees_test_ideals(s: &Semigroup) -> Vec<dec::Ideal> {
    if s.order() <= EXHAUSTIVE_IDEAL_ORDER {
        dec::all_ideals(s)
    } else {
        let mut ideals: Vec<dec::Ideal> =
            s.elements().map(|a| dec::principal_ideal(s, a)).collect();
        ideals.sort_by(|a, b| a.members().cmp(b.members()));
        ideals.dedup();
        ideals
    }
}

fn check_rees(s: &Semigroup, big_d: usize) -> Option<String> {
    rees_test_ideals(s).into_iter().find_map(|ideal| {
        let quotient = match dec::rees_quotient(s, &ideal) {
            Ok(q) => q,
            Err(e) => return Some(e.to_string()),
        };
        let d = zerosum::davenport(&quotient.target);
        (d > big_d).then(|| {
            format!(
                "D(S/I) = {d} > D(S) = {big_d} for I = {:?}",
                ideal.members()
            )
        })
    })
}

fn check_annihilators(s: &Semigroup) -> Option<String> {
    let annihilators: Vec<Vec<ElementId>> =
        match s.elements().map(|a| dec::annihilator(s, a)).collect() {
            Ok(v) => v,
            Err(e) => return Some(e.to_string()),
        };
    for a in s.elements() {
        for b in s.elements() {
            if !green::green_lt(s, a, b) {
                continue;
            }
            let (ann_a, ann_b) = (&annihilators[a], &annihilators[b]);
            let strict_subset =
                ann_b.len() < ann_a.len() && ann_b.iter().all(|x| ann_a.contains(x));
            if !strict_subset {
                return Some(format!(
                    "{a} <_H {b} but ∞:{b} = {ann_b:?}, ∞:{a} = {ann_a:?}"
                ));
            }
        }
    }
    None
}

fn check_unit_action(s: &Semigroup, split: &dec::ElementarySplit) -> Option<String> {
    let Some(nil) = s.restrict(&split.nil_part) else {
        return Some("nil part is not closed".into());
    };
    let classes = match dec::p_classes(&nil.semigroup) {
        Ok(p) => p,
        Err(e) => return Some(e.to_string()),
    };
    for &g in &split.group_part {
        for class in classes.classes() {
            let members: Vec<ElementId> = class.iter().map(|&i| nil.members[i]).collect();
            let mut image: Vec<ElementId> = members.iter().map(|&x| s.add(g, x)).collect();
            image.sort_unstable();
            if image != members {
                return Some(format!("{g} + {members:?} = {image:?}"));
            }
        }
    }
    None
}

fn check_nil_addition(s: &Semigroup) -> Option<String> {
    let zero = s.zero()?;
    s.elements()
        .flat_map(|a| s.elements().map(move |b| (a, b)))
        .find(|&(a, b)| s.add(a, b) == a && a != zero)
        .map(|(a, b)| format!("{a} + {b} = {a} but {a} is not the zero"))
}

/// Where the entries of a run come from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunSource {
    Order(usize),
    Dir(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub source: RunSource,
    pub cap: Option<usize>,
    pub jobs: usize,
}

/// Configuration as echoed in reports. The worker count is left out so
/// reports do not depend on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigEcho {
    pub source: RunSource,
    pub cap: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntryReport {
    /// `generated` or the input path.
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<InvariantReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub validation_error: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Aggregate {
    pub entries: usize,
    pub analyzed: usize,
    pub input_errors: usize,
    pub claims_applicable: usize,
    pub claims_held: usize,
    pub theorem_failures: usize,
    pub conjecture_failures: usize,
    pub cap_exceeded: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub config: ConfigEcho,
    pub entries: Vec<EntryReport>,
    pub aggregate: Aggregate,
    pub wall_time_ms: u128,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        if self.aggregate.theorem_failures > 0 {
            3
        } else if self.entries.iter().any(|e| e.validation_error) {
            2
        } else if self.aggregate.input_errors > 0 {
            1
        } else {
            0
        }
    }

    /// Every conjecture counterexample as `(source, claim, witness)`.
    pub fn conjecture_counterexamples(&self) -> Vec<(&str, ClaimId, &str)> {
        self.entries
            .iter()
            .filter_map(|e| Some((e.source.as_str(), e.report.as_ref()?)))
            .flat_map(|(src, r)| {
                r.checks
                    .iter()
                    .filter(|v| v.failed() && v.claim.is_conjecture())
                    .map(move |v| (src, v.claim, v.witness.as_deref().unwrap_or("")))
            })
            .collect()
    }
}

fn aggregate(entries: &[EntryReport]) -> Aggregate {
    let mut agg = Aggregate {
        entries: entries.len(),
        ..Aggregate::default()
    };
    for entry in entries {
        let Some(report) = &entry.report else {
            agg.input_errors += 1;
            continue;
        };
        agg.analyzed += 1;
        agg.cap_exceeded += matches!(report.egz, EgzValue::CapExceeded(_)) as usize;
        for v in &report.checks {
            agg.claims_applicable += v.applicable as usize;
            agg.claims_held += (v.holds == Some(true)) as usize;
        }
        agg.theorem_failures += report.theorem_failures();
        agg.conjecture_failures += report.conjecture_failures();
    }
    agg
}

enum Loaded {
    Entry(CatalogEntry),
    Unsized(Semigroup, PathBuf),
    Failed(PathBuf, CatalogError),
}

fn load_dir(dir: &std::path::Path) -> Result<Vec<Loaded>, CatalogError> {
    let io = |source| CatalogError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut paths = Vec::new();
    for item in std::fs::read_dir(dir).map_err(io)? {
        let path = item.map_err(io)?.path();
        if path.is_file() {
            paths.push(path);
        }
    }
    paths.sort();
    Ok(paths
        .into_iter()
        .map(|path| match catalog::read_file(&path) {
            Ok(s) => match CatalogEntry::new(s.clone(), Source::File(path.clone())) {
                Ok(entry) => Loaded::Entry(entry),
                Err(_) => Loaded::Unsized(s, path),
            },
            Err(e) => Loaded::Failed(path, e),
        })
        .collect())
}

/// Analyzes every entry of a generated catalog or a directory of table files.
/// Entries are reported in canonical-form order, then unsized tables and
/// unreadable files by path.
pub fn run_verification(config: &RunConfig) -> Result<RunReport, CatalogError> {
    let started = Instant::now();
    let mut inputs: Vec<(
        Option<CanonicalForm>,
        String,
        Result<Semigroup, CatalogError>,
    )> = match &config.source {
        RunSource::Order(n) => catalog::generate_commutative(*n)?
            .into_iter()
            .map(|e| (Some(e.canonical), "generated".to_string(), Ok(e.semigroup)))
            .collect(),
        RunSource::Dir(dir) => load_dir(dir)?
            .into_iter()
            .map(|loaded| match loaded {
                Loaded::Entry(e) => {
                    let Source::File(path) = e.source else {
                        unreachable!("directory entries come from files")
                    };
                    (
                        Some(e.canonical),
                        path.display().to_string(),
                        Ok(e.semigroup),
                    )
                }
                Loaded::Unsized(s, path) => (None, path.display().to_string(), Ok(s)),
                Loaded::Failed(path, err) => (None, path.display().to_string(), Err(err)),
            })
            .collect(),
    };
    inputs.sort_by(|a, b| match (&a.0, &b.0) {
        (Some(x), Some(y)) => x.cmp(y).then_with(|| a.1.cmp(&b.1)),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => a.1.cmp(&b.1),
    });

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs.max(1))
        .build()
        .expect("thread pool");
    let entries: Vec<EntryReport> = pool.install(|| {
        inputs
            .into_par_iter()
            .map(|(_, source, loaded)| match loaded {
                Ok(s) => EntryReport {
                    source,
                    report: Some(analyze(&s, config.cap)),
                    error: None,
                    validation_error: false,
                },
                Err(e) => EntryReport {
                    source,
                    report: None,
                    validation_error: e.is_validation(),
                    error: Some(e.to_string()),
                },
            })
            .collect()
    });

    let aggregate = aggregate(&entries);
    Ok(RunReport {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        config: ConfigEcho {
            source: config.source.clone(),
            cap: config.cap,
        },
        entries,
        aggregate,
        wall_time_ms: started.elapsed().as_millis(),
    })
}
