//! Ideals, Rees quotients, nilsemigroups, archimedean and elementary structure.

use thiserror::Error;

use crate::cayley::{ElementId, Restriction, Semigroup};
use crate::green::{self, GreenError, Partition, QuotientMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("subset {0:?} is not an ideal")]
    NotAnIdeal(Vec<ElementId>),
    #[error("semigroup is not a nilsemigroup")]
    NotNilsemigroup,
    #[error("semigroup is not archimedean")]
    NotArchimedean,
    #[error("archimedean semigroup has idempotents {0:?}, expected exactly one")]
    MultipleIdempotents(Vec<ElementId>),
    #[error("archimedean component {0:?} is not closed or not archimedean")]
    ComponentNotClosed(Vec<ElementId>),
    #[error("element {0} is not idempotent")]
    NotIdempotent(ElementId),
    #[error("H-class {0:?} is not a group under the restricted operation")]
    NotAGroup(Vec<ElementId>),
    #[error(transparent)]
    Congruence(#[from] GreenError),
}

/// A nonempty subset absorbing addition by every element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ideal {
    members: Vec<ElementId>,
}

impl Ideal {
    pub fn new(s: &Semigroup, members: &[ElementId]) -> Result<Self, DecompositionError> {
        let mut members = members.to_vec();
        members.sort_unstable();
        members.dedup();
        if is_ideal(s, &members) {
            Ok(Ideal { members })
        } else {
            Err(DecompositionError::NotAnIdeal(members))
        }
    }

    pub fn members(&self) -> &[ElementId] {
        &self.members
    }

    pub fn contains(&self, a: ElementId) -> bool {
        self.members.binary_search(&a).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// `S = G ∪ N` with `G` the unit group and `N` a nil ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementarySplit {
    pub group_part: Vec<ElementId>,
    pub nil_part: Vec<ElementId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArchimedeanData {
    /// The unique idempotent.
    pub idempotent: ElementId,
    /// `e + S`, which is also `H_e`.
    pub kernel: Vec<ElementId>,
    pub kernel_group: Restriction,
    /// Rees quotient `S/K`; the kernel becomes its zero.
    pub nil_quotient: QuotientMap,
    pub nilpotency_index_of_quotient: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemilatticeDecomposition {
    pub components: Partition,
    pub semilattice: Semigroup,
}

pub fn is_ideal(s: &Semigroup, subset: &[ElementId]) -> bool {
    if subset.is_empty() {
        return false;
    }
    let mut member = vec![false; s.order()];
    for &a in subset {
        member[a] = true;
    }
    subset
        .iter()
        .all(|&a| s.elements().all(|x| member[s.add(a, x)]))
}

/// `a + S⁰`.
pub fn principal_ideal(s: &Semigroup, a: ElementId) -> Ideal {
    let mut members: Vec<ElementId> = s.elements().map(|x| s.add(a, x)).collect();
    members.push(a);
    members.sort_unstable();
    members.dedup();
    Ideal { members }
}

/// Every ideal of `s`, by filtering all nonempty subsets. Exponential in the
/// order; meant for small semigroups.
pub fn all_ideals(s: &Semigroup) -> Vec<Ideal> {
    let n = s.order();
    assert!(n < usize::BITS as usize, "too many subsets to enumerate");
    (1usize..1 << n)
        .filter_map(|mask| {
            let members: Vec<ElementId> = (0..n).filter(|&a| mask >> a & 1 == 1).collect();
            is_ideal(s, &members).then_some(Ideal { members })
        })
        .collect()
}

/// The kernel: the principal ideal of an element lowest in `≤_H`.
pub fn minimal_ideal(s: &Semigroup) -> Ideal {
    let kernel = s
        .elements()
        .map(|a| principal_ideal(s, a))
        .min_by_key(Ideal::len)
        .expect("semigroups are nonempty");
    debug_assert!(s.elements().all(|a| kernel
        .members
        .iter()
        .all(|&k| principal_ideal(s, a).contains(k))));
    kernel
}

/// `S/I`: elements outside the ideal keep their relative order, the ideal
/// becomes the zero with the largest id.
pub fn rees_quotient(s: &Semigroup, ideal: &Ideal) -> Result<QuotientMap, DecompositionError> {
    if !is_ideal(s, ideal.members()) {
        return Err(DecompositionError::NotAnIdeal(ideal.members().to_vec()));
    }
    let count = s.order() - ideal.len() + 1;
    let mut next = 0;
    let labels: Vec<ElementId> = s
        .elements()
        .map(|a| {
            if ideal.contains(a) {
                count - 1
            } else {
                next += 1;
                next - 1
            }
        })
        .collect();
    Ok(green::quotient_by_labels(s, &labels, count)?)
}

/// Nilpotency index `L(S)`: least `t` with `|t·S| = 1`, where `t·S` is the
/// set of all sums of `t` terms. `None` when `s` is not a nilsemigroup.
pub fn nilpotency(s: &Semigroup) -> Option<usize> {
    let n = s.order();
    let mut current = vec![true; n];
    let mut t = 1;
    loop {
        let size = current.iter().filter(|&&m| m).count();
        if size == 1 {
            return Some(t);
        }
        let mut next = vec![false; n];
        for a in (0..n).filter(|&a| current[a]) {
            for x in s.elements() {
                next[s.add(a, x)] = true;
            }
        }
        if next == current {
            return None;
        }
        current = next;
        t += 1;
    }
}

pub fn is_nilsemigroup(s: &Semigroup) -> bool {
    nilpotency(s).is_some()
}

/// `∞:a = {x ∈ S⁰ : x + a = ∞}`, as ids of [`Semigroup::adjoin_identity`].
pub fn annihilator(s: &Semigroup, a: ElementId) -> Result<Vec<ElementId>, DecompositionError> {
    if !is_nilsemigroup(s) {
        return Err(DecompositionError::NotNilsemigroup);
    }
    let zero = s.zero().expect("nilsemigroups have a zero");
    let s0 = s.adjoin_identity();
    Ok(s0.elements().filter(|&x| s0.add(x, a) == zero).collect())
}

/// Classes of equal annihilators.
pub fn p_classes(s: &Semigroup) -> Result<Partition, DecompositionError> {
    let annihilators = s
        .elements()
        .map(|a| annihilator(s, a))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Partition::from_labels(&annihilators))
}

/// Some multiple of `a` lies in `b + S`.
fn divides_multiple(s: &Semigroup, b: ElementId, a: ElementId) -> bool {
    s.multiples(a)
        .into_iter()
        .any(|m| s.elements().any(|x| s.add(b, x) == m))
}

pub fn is_archimedean(s: &Semigroup) -> bool {
    s.elements()
        .all(|a| s.elements().all(|b| divides_multiple(s, b, a)))
}

/// Splits `s` into archimedean components over a semilattice of indices.
pub fn semilattice_decomposition(
    s: &Semigroup,
) -> Result<SemilatticeDecomposition, DecompositionError> {
    let components = Partition::from_relation(s.order(), |a, b| {
        divides_multiple(s, b, a) && divides_multiple(s, a, b)
    });
    for class in components.classes() {
        match s.restrict(class) {
            Some(r) if is_archimedean(&r.semigroup) => {}
            _ => return Err(DecompositionError::ComponentNotClosed(class.clone())),
        }
    }
    let semilattice = green::quotient_by(s, &components)?.target;
    debug_assert!(semilattice.elements().all(|c| semilattice.is_idempotent(c)));
    Ok(SemilatticeDecomposition {
        components,
        semilattice,
    })
}

pub fn archimedean_data(s: &Semigroup) -> Result<ArchimedeanData, DecompositionError> {
    if !is_archimedean(s) {
        return Err(DecompositionError::NotArchimedean);
    }
    let idempotents = s.idempotents();
    let [e] = idempotents[..] else {
        return Err(DecompositionError::MultipleIdempotents(idempotents));
    };
    let kernel = principal_ideal(s, e);
    let h_class = h_class_of(s, e);
    let kernel_group = match s.restrict(kernel.members()) {
        Some(r) if r.semigroup.is_group() && h_class == kernel.members() => r,
        _ => return Err(DecompositionError::NotAGroup(kernel.members().to_vec())),
    };
    let nil_quotient = rees_quotient(s, &kernel)?;
    let nilpotency_index_of_quotient =
        nilpotency(&nil_quotient.target).ok_or(DecompositionError::NotNilsemigroup)?;
    Ok(ArchimedeanData {
        idempotent: e,
        kernel: kernel.members,
        kernel_group,
        nil_quotient,
        nilpotency_index_of_quotient,
    })
}

/// `a ↦ e + a`, the retraction onto the kernel.
pub fn kernel_retraction(s: &Semigroup, data: &ArchimedeanData, a: ElementId) -> ElementId {
    s.add(data.idempotent, a)
}

fn h_class_of(s: &Semigroup, a: ElementId) -> Vec<ElementId> {
    s.elements()
        .filter(|&b| green::green_leq(s, a, b) && green::green_leq(s, b, a))
        .collect()
}

/// Decides whether `s` is elementary. Both parts must be nonempty, so groups
/// and nilsemigroups are not elementary.
pub fn elementary_split(s: &Semigroup) -> Option<ElementarySplit> {
    let identity = s.identity()?;
    let zero = s.zero()?;
    let group_part = h_class_of(s, identity);
    let nil_part: Vec<ElementId> = s.elements().filter(|a| !group_part.contains(a)).collect();
    if nil_part.is_empty() {
        return None;
    }
    let group = s.restrict(&group_part)?;
    if !group.semigroup.is_group()
        || group.semigroup.identity().map(|i| group.members[i]) != Some(identity)
    {
        return None;
    }
    if !is_ideal(s, &nil_part) {
        return None;
    }
    let nil = s.restrict(&nil_part)?;
    if !is_nilsemigroup(&nil.semigroup)
        || nil.semigroup.zero().map(|z| nil.members[z]) != Some(zero)
    {
        return None;
    }
    Some(ElementarySplit {
        group_part,
        nil_part,
    })
}

/// `H_e` with the restricted operation, a group with identity `e`.
pub fn maximal_subgroup_at(s: &Semigroup, e: ElementId) -> Result<Restriction, DecompositionError> {
    if !s.is_idempotent(e) {
        return Err(DecompositionError::NotIdempotent(e));
    }
    let class = h_class_of(s, e);
    match s.restrict(&class) {
        Some(r)
            if r.semigroup.is_group()
                && r.semigroup.identity().map(|i| r.members[i]) == Some(e) =>
        {
            Ok(r)
        }
        _ => Err(DecompositionError::NotAGroup(class)),
    }
}
