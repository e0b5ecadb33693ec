use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use super::{GenPerm, GroupError, Representation};

/// Default bound on the number of elements produced by a closure.
pub const DEFAULT_ORDER_CAP: usize = 1024;

/// A finite group given by its Cayley table.
///
/// Element `0` is the identity. Every non-identity element carries the BFS
/// word it was discovered by (`parent * generator`), which is how
/// representations of the group are extended from generator images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    cayley: Vec<usize>,
    inverse: Vec<usize>,
    generators: Vec<usize>,
    // (parent element, generator slot) for every element but the identity
    word: Vec<Option<(usize, usize)>>,
}

impl FiniteGroup {
    pub const IDENTITY: usize = 0;

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> usize {
        Self::IDENTITY
    }

    /// Index of the product `a * b`.
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.cayley[a * self.order + b]
    }

    #[inline]
    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    /// Element indices of the generators, one per generator slot.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// Row `a` of the Cayley table.
    pub fn cayley_row(&self, a: usize) -> &[usize] {
        &self.cayley[a * self.order..(a + 1) * self.order]
    }

    /// The BFS parent and generator slot of `g`; `None` for the identity.
    pub fn word_step(&self, g: usize) -> Option<(usize, usize)> {
        self.word[g]
    }

    /// Order of each element.
    pub fn element_orders(&self) -> Vec<usize> {
        self.elements()
            .map(|g| {
                let mut k = 1;
                let mut x = g;
                while x != Self::IDENTITY {
                    x = self.mul(x, g);
                    k += 1;
                }
                k
            })
            .collect()
    }

    /// Exhaustive group-axiom check on the table (`O(order³)`).
    pub fn check_axioms(&self) -> Result<(), String> {
        let e = Self::IDENTITY;
        for x in self.elements() {
            if self.mul(e, x) != x || self.mul(x, e) != x {
                return Err(format!("identity law fails at {x}"));
            }
            if self.mul(x, self.inverse(x)) != e || self.mul(self.inverse(x), x) != e {
                return Err(format!("inverse law fails at {x}"));
            }
        }
        for a in self.elements() {
            for b in self.elements() {
                let ab = self.mul(a, b);
                for c in self.elements() {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(format!("associativity fails at ({a}, {b}, {c})"));
                    }
                }
            }
        }
        Ok(())
    }

    /// True when both groups share the same table (same element numbering).
    pub fn same_as(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }

    /// Builds the group from its Cayley table. Element 0 must be the identity and
    /// `generators` must generate the whole table.
    pub fn from_cayley(order: usize, cayley: Vec<usize>, generators: Vec<usize>) -> Result<Self, GroupError> {
        if order == 0 || cayley.len() != order * order || cayley.iter().any(|&x| x >= order) {
            return Err(GroupError::InvalidTable("table shape".into()));
        }
        let mut inverse = vec![usize::MAX; order];
        for a in 0..order {
            if let Some(b) = (0..order).find(|&b| cayley[a * order + b] == 0) {
                inverse[a] = b;
            } else {
                return Err(GroupError::InvalidTable(format!("element {a} has no inverse")));
            }
        }
        let mut word = vec![None; order];
        let mut seen = vec![false; order];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (slot, &s) in generators.iter().enumerate() {
                let y = cayley[x * order + s];
                if !seen[y] {
                    seen[y] = true;
                    word[y] = Some((x, slot));
                    queue.push_back(y);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(GroupError::InvalidTable("generators do not generate the table".into()));
        }
        let group = FiniteGroup { order, cayley, inverse, generators, word };
        group.check_axioms().map_err(GroupError::InvalidTable)?;
        Ok(group)
    }
}

/// Closes a list of generalized-permutation generators under matrix product.
///
/// Returns the abstract group together with the representation holding every
/// distinct product. Elements are numbered identity first, then in BFS
/// discovery order where element `x` is expanded to `x * s` for each generator
/// `s` in the given order.
pub fn group_closure(generators: &[GenPerm], order_cap: usize) -> Result<(Arc<FiniteGroup>, Representation), GroupError> {
    let (group, mut reps) = close_jointly(&[generators.to_vec()], order_cap)?;
    Ok((group, reps.pop().expect("one representation per generator set")))
}

/// Closes several representations of the same abstract group at once.
///
/// `generator_sets[r][s]` is the image of generator `s` in representation `r`.
/// The group is the closure of the block-diagonal generators `⊕_r
/// generator_sets[r][s]`, so a non-faithful representation (e.g. a sign flip
/// next to a permutation) is still tied to the right abstract element.
pub fn close_jointly(
    generator_sets: &[Vec<GenPerm>],
    order_cap: usize,
) -> Result<(Arc<FiniteGroup>, Vec<Representation>), GroupError> {
    if order_cap == 0 {
        return Err(GroupError::ClosureExceeded { cap: 0 });
    }
    let Some(first) = generator_sets.first() else {
        return Err(GroupError::NoGenerators);
    };
    let n_gens = first.len();
    let mut dims = Vec::with_capacity(generator_sets.len());
    for set in generator_sets {
        if set.len() != n_gens {
            return Err(GroupError::GeneratorCountMismatch { expected: n_gens, got: set.len() });
        }
        let dim = match set.first() {
            Some(g) => g.dim(),
            None => return Err(GroupError::NoGenerators),
        };
        if let Some(bad) = set.iter().find(|g| g.dim() != dim) {
            return Err(GroupError::DimMismatch { expected: dim, got: bad.dim() });
        }
        dims.push(dim);
    }
    let joint: Vec<GenPerm> = (0..n_gens)
        .map(|s| {
            let mut it = generator_sets.iter().map(|set| &set[s]);
            let head = it.next().expect("non-empty").clone();
            it.fold(head, |acc, g| acc.direct_sum(g))
        })
        .collect();
    let total: usize = dims.iter().sum();

    let mut elements = vec![GenPerm::identity(total)];
    let mut index: HashMap<GenPerm, usize> = HashMap::from([(elements[0].clone(), 0)]);
    let mut word = vec![None];
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (slot, s) in joint.iter().enumerate() {
            let y = elements[x].compose(s);
            if !index.contains_key(&y) {
                if elements.len() == order_cap {
                    return Err(GroupError::ClosureExceeded { cap: order_cap });
                }
                index.insert(y.clone(), elements.len());
                elements.push(y);
                word.push(Some((x, slot)));
                queue.push_back(elements.len() - 1);
            }
        }
    }

    let order = elements.len();
    let mut cayley = vec![0; order * order];
    for a in 0..order {
        for b in 0..order {
            cayley[a * order + b] = index[&elements[a].compose(&elements[b])];
        }
    }
    let inverse = elements.iter().map(|x| index[&x.inverse()]).collect();
    let generators = joint.iter().map(|s| index[s]).collect();
    let group = Arc::new(FiniteGroup { order, cayley, inverse, generators, word });

    let mut reps = Vec::with_capacity(dims.len());
    let mut start = 0;
    for &dim in &dims {
        let matrices = elements
            .iter()
            .map(|x| x.block(start, dim).expect("block-diagonal by construction"))
            .collect();
        reps.push(Representation::new(group.clone(), matrices)?);
        start += dim;
    }
    Ok((group, reps))
}
