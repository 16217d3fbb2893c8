//! Depth-256 sparse Merkle tree over precomputed leaf digests.
//!
//! This layer is label-agnostic: callers supply `(label, leaf_digest)`
//! pairs, already sorted ascending by label bytes, and the tree places each
//! leaf at the position spelled by the label's bits (MSB-first: bit 0 is the
//! most significant bit of byte 0, chosen at the root). The salted
//! commitment tree and the transparency-log map differ only in how they
//! derive leaf digests, so both sit on top of this module.
//!
//! Empty subtrees collapse to precomputed digests `E[d]` and subtrees
//! containing a single leaf collapse to a spine fold, so construction is
//! `O(n · depth)` hashing and `O(n)` memory instead of the astronomically
//! large naive tree.

use std::sync::OnceLock;

use crate::crypto::{hash_parts, TAG_NODE};
use crate::model::Digest;

/// Tree depth: one level per label bit.
pub(crate) const DEPTH: usize = 256;

/// Below this many leaves a subtree is built on the current thread even when
/// the `parallel` feature is enabled; forking has no payoff for tiny slices.
#[cfg(feature = "parallel")]
const PARALLEL_THRESHOLD: usize = 64;

/// Digest of the all-empty subtree whose root sits at `depth`.
///
/// `E[DEPTH]` is 32 zero bytes (the vacant leaf) and
/// `E[d] = H(0x01 ‖ E[d+1] ‖ E[d+1])` above it.
pub(crate) fn empty_digest(depth: usize) -> Digest {
    static TABLE: OnceLock<[Digest; DEPTH + 1]> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = [Digest::ZERO; DEPTH + 1];
        for d in (0..DEPTH).rev() {
            t[d] = hash_parts(&[&[TAG_NODE], t[d + 1].as_ref(), t[d + 1].as_ref()]);
        }
        t
    });
    table[depth]
}

/// Folds a leaf digest up from depth 256 to `to_depth`, pairing with empty
/// siblings the whole way. This is the digest of a subtree rooted at
/// `to_depth` that contains exactly the one leaf.
pub(crate) fn fold_spine(leaf: Digest, label: &Digest, to_depth: usize) -> Digest {
    let mut acc = leaf;
    for i in (to_depth..DEPTH).rev() {
        let e = empty_digest(i + 1);
        acc = if label.bit(i) {
            hash_parts(&[&[TAG_NODE], e.as_ref(), acc.as_ref()])
        } else {
            hash_parts(&[&[TAG_NODE], acc.as_ref(), e.as_ref()])
        };
    }
    acc
}

/// Recomputes the root from a leaf digest and a full sibling list.
/// `siblings[i]` is the depth-`i+1` digest consumed when folding across bit
/// `i`; the list is root-to-leaf, so folding runs over it in reverse.
pub(crate) fn fold_siblings(leaf: Digest, label: &Digest, siblings: &[Digest]) -> Digest {
    debug_assert_eq!(siblings.len(), DEPTH);
    let mut acc = leaf;
    for i in (0..DEPTH).rev() {
        acc = if label.bit(i) {
            hash_parts(&[&[TAG_NODE], siblings[i].as_ref(), acc.as_ref()])
        } else {
            hash_parts(&[&[TAG_NODE], acc.as_ref(), siblings[i].as_ref()])
        };
    }
    acc
}

enum Node {
    /// No leaves below this point; digest is `E[depth]`.
    Empty,
    /// Exactly one leaf below this point; `digest` caches the spine fold at
    /// the node's own depth.
    Single {
        label: Digest,
        leaf: Digest,
        digest: Digest,
    },
    Internal {
        digest: Digest,
        left: Box<Node>,
        right: Box<Node>,
    },
}

impl Node {
    fn digest(&self, depth: usize) -> Digest {
        match self {
            Node::Empty => empty_digest(depth),
            Node::Single { digest, .. } => *digest,
            Node::Internal { digest, .. } => *digest,
        }
    }
}

/// An immutable sparse Merkle tree supporting root and sibling-path reads.
pub(crate) struct SparseTree {
    root: Node,
}

impl SparseTree {
    /// Builds from `(label, leaf_digest)` pairs sorted ascending by label
    /// bytes with unique labels. Parallelized across subtrees when the
    /// `parallel` feature is on.
    pub fn build(leaves: &[(Digest, Digest)]) -> Self {
        debug_assert!(leaves.windows(2).all(|w| w[0].0 < w[1].0));
        SparseTree {
            root: build_node::<true>(leaves, 0),
        }
    }

    /// Single-threaded build with identical output; the baseline for the
    /// parallel-versus-sequential benchmarks.
    pub fn build_sequential(leaves: &[(Digest, Digest)]) -> Self {
        debug_assert!(leaves.windows(2).all(|w| w[0].0 < w[1].0));
        SparseTree {
            root: build_node::<false>(leaves, 0),
        }
    }

    pub fn root_digest(&self) -> Digest {
        self.root.digest(0)
    }

    /// Full sibling list (length 256, root-to-leaf) for the path addressed
    /// by `label`. Works for occupied and vacant positions alike; vacant
    /// paths authenticate the empty leaf.
    pub fn siblings(&self, label: &Digest) -> Vec<Digest> {
        let mut sibs = vec![Digest::ZERO; DEPTH];
        let mut node = &self.root;
        let mut depth = 0;
        loop {
            match node {
                Node::Empty => {
                    for (i, s) in sibs.iter_mut().enumerate().skip(depth) {
                        *s = empty_digest(i + 1);
                    }
                    return sibs;
                }
                Node::Single {
                    label: occupant,
                    leaf,
                    ..
                } => {
                    for i in depth..DEPTH {
                        if label.bit(i) == occupant.bit(i) {
                            // Path continues beside the occupant; nothing on
                            // the other side.
                            sibs[i] = empty_digest(i + 1);
                        } else {
                            // Paths diverge: the occupant's whole spine is
                            // the sibling here, and everything deeper on the
                            // query side is vacant.
                            sibs[i] = fold_spine(*leaf, occupant, i + 1);
                            for (j, s) in sibs.iter_mut().enumerate().skip(i + 1) {
                                *s = empty_digest(j + 1);
                            }
                            break;
                        }
                    }
                    return sibs;
                }
                Node::Internal { left, right, .. } => {
                    if label.bit(depth) {
                        sibs[depth] = left.digest(depth + 1);
                        node = right;
                    } else {
                        sibs[depth] = right.digest(depth + 1);
                        node = left;
                    }
                    depth += 1;
                }
            }
        }
    }
}

fn build_node<const PAR: bool>(leaves: &[(Digest, Digest)], depth: usize) -> Node {
    match leaves {
        [] => Node::Empty,
        [(label, leaf)] => Node::Single {
            label: *label,
            leaf: *leaf,
            digest: fold_spine(*leaf, label, depth),
        },
        _ => {
            // Sorted-by-label input means the zero-bit entries at this depth
            // form a contiguous prefix.
            let split = leaves.partition_point(|(label, _)| !label.bit(depth));
            let (lo, hi) = leaves.split_at(split);
            let (left, right) = join_build::<PAR>(lo, hi, depth + 1);
            let digest = hash_parts(&[
                &[TAG_NODE],
                left.digest(depth + 1).as_ref(),
                right.digest(depth + 1).as_ref(),
            ]);
            Node::Internal {
                digest,
                left: Box::new(left),
                right: Box::new(right),
            }
        }
    }
}

#[cfg(feature = "parallel")]
fn join_build<const PAR: bool>(
    lo: &[(Digest, Digest)],
    hi: &[(Digest, Digest)],
    depth: usize,
) -> (Node, Node) {
    if PAR && lo.len() + hi.len() >= PARALLEL_THRESHOLD {
        rayon::join(
            || build_node::<PAR>(lo, depth),
            || build_node::<PAR>(hi, depth),
        )
    } else {
        (build_node::<PAR>(lo, depth), build_node::<PAR>(hi, depth))
    }
}

#[cfg(not(feature = "parallel"))]
fn join_build<const PAR: bool>(
    lo: &[(Digest, Digest)],
    hi: &[(Digest, Digest)],
    depth: usize,
) -> (Node, Node) {
    (build_node::<PAR>(lo, depth), build_node::<PAR>(hi, depth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crypto::hash;

    fn leaves(n: u8) -> Vec<(Digest, Digest)> {
        let mut v: Vec<(Digest, Digest)> = (0..n)
            .map(|i| (hash(&[i]), hash(&[0xf0, i])))
            .collect();
        v.sort_by_key(|pair| pair.0);
        v
    }

    #[test]
    fn empty_digest_chain_is_consistent() {
        assert_eq!(empty_digest(DEPTH), Digest::ZERO);
        let recomputed = hash_parts(&[
            &[TAG_NODE],
            empty_digest(1).as_ref(),
            empty_digest(1).as_ref(),
        ]);
        assert_eq!(empty_digest(0), recomputed);
    }

    #[test]
    fn empty_tree_root_is_e0() {
        let t = SparseTree::build(&[]);
        assert_eq!(t.root_digest(), empty_digest(0));
    }

    #[test]
    fn single_leaf_root_equals_spine_fold() {
        let label = hash(b"only");
        let leaf = hash(b"leaf");
        let t = SparseTree::build(&[(label, leaf)]);
        assert_eq!(t.root_digest(), fold_spine(leaf, &label, 0));
    }

    #[test]
    fn sibling_fold_reproduces_root_for_members_and_non_members() {
        let ls = leaves(9);
        let t = SparseTree::build(&ls);
        let root = t.root_digest();
        for (label, leaf) in &ls {
            let sibs = t.siblings(label);
            assert_eq!(fold_siblings(*leaf, label, &sibs), root);
        }
        for probe in 0..16u8 {
            let label = hash(&[0xee, probe]);
            if ls.iter().any(|(l, _)| *l == label) {
                continue;
            }
            let sibs = t.siblings(&label);
            assert_eq!(fold_siblings(empty_digest(DEPTH), &label, &sibs), root);
        }
    }

    #[test]
    fn sequential_build_matches_parallel_build() {
        let ls = leaves(100);
        assert_eq!(
            SparseTree::build(&ls).root_digest(),
            SparseTree::build_sequential(&ls).root_digest()
        );
    }

    #[test]
    fn root_changes_when_any_leaf_changes() {
        let ls = leaves(8);
        let base = SparseTree::build(&ls).root_digest();
        for i in 0..ls.len() {
            let mut mutated = ls.clone();
            mutated[i].1 = hash(b"tampered");
            assert_ne!(SparseTree::build(&mutated).root_digest(), base);
        }
    }
}
