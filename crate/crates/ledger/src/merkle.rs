//! Append-only, fixed-depth Merkle tree of commitments. Missing leaves are
//! 0 and `parent = hash([left, right])`.

use desksnark::algebra::Scalar;

use crate::{DapError, DapParams};

/// Siblings and direction bits from the leaf upwards. `bits[i]` is true when
/// the running node is the right child at level `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuthPath {
    pub siblings: Vec<Scalar>,
    pub bits: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MerkleTree {
    depth: usize,
    leaves: Vec<Scalar>,
    /// `levels[l]` holds the populated nodes at height `l`; `levels[0]` are
    /// the leaves and `levels[depth]` the root.
    levels: Vec<Vec<Scalar>>,
    /// Root of an all-empty subtree of each height.
    empty: Vec<Scalar>,
}

impl MerkleTree {
    pub fn new(params: &DapParams) -> Self {
        let mut empty = vec![params.domain().zero()];
        for l in 0..params.depth {
            let z = empty[l].clone();
            empty.push(params.mimc.h(&[z.clone(), z]));
        }
        let mut t = MerkleTree {
            depth: params.depth,
            leaves: Vec::new(),
            levels: vec![Vec::new(); params.depth + 1],
            empty,
        };
        t.levels[params.depth] = vec![t.empty[params.depth].clone()];
        t
    }

    pub fn from_leaves(params: &DapParams, leaves: &[Scalar]) -> Result<Self, DapError> {
        let mut t = MerkleTree::new(params);
        for cm in leaves {
            t.append(params, cm.clone())?;
        }
        Ok(t)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn capacity(&self) -> usize {
        1 << self.depth
    }

    pub fn leaves(&self) -> &[Scalar] {
        &self.leaves
    }

    pub fn root(&self) -> &Scalar {
        &self.levels[self.depth][0]
    }

    pub fn position(&self, cm: &Scalar) -> Option<usize> {
        self.leaves.iter().position(|l| l == cm)
    }

    fn node(&self, level: usize, index: usize) -> &Scalar {
        self.levels[level].get(index).unwrap_or(&self.empty[level])
    }

    pub fn append(&mut self, params: &DapParams, cm: Scalar) -> Result<usize, DapError> {
        let idx = self.leaves.len();
        if idx >= self.capacity() {
            return Err(DapError::TreeFull(self.capacity()));
        }
        self.leaves.push(cm.clone());
        self.levels[0].push(cm);
        let mut i = idx;
        for l in 0..self.depth {
            let parent = i / 2;
            let h = params
                .mimc
                .h(&[self.node(l, 2 * parent).clone(), self.node(l, 2 * parent + 1).clone()]);
            let up = &mut self.levels[l + 1];
            if parent < up.len() {
                up[parent] = h;
            } else {
                up.push(h);
            }
            i = parent;
        }
        Ok(idx)
    }

    pub fn path(&self, index: usize) -> Result<AuthPath, DapError> {
        if index >= self.leaves.len() {
            return Err(DapError::BadLeafIndex(index));
        }
        let mut siblings = Vec::with_capacity(self.depth);
        let mut bits = Vec::with_capacity(self.depth);
        let mut i = index;
        for l in 0..self.depth {
            siblings.push(self.node(l, i ^ 1).clone());
            bits.push(i & 1 == 1);
            i /= 2;
        }
        Ok(AuthPath { siblings, bits })
    }
}

/// Recomputes the root from `leaf` along `path` and compares.
pub fn merkle_check(params: &DapParams, root: &Scalar, leaf: &Scalar, path: &AuthPath) -> bool {
    if path.siblings.len() != params.depth || path.bits.len() != params.depth {
        return false;
    }
    let top = path
        .siblings
        .iter()
        .zip(&path.bits)
        .fold(leaf.clone(), |cur, (sib, right)| {
            if *right {
                params.mimc.h(&[sib.clone(), cur])
            } else {
                params.mimc.h(&[cur, sib.clone()])
            }
        });
    &top == root
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_leaf_path_checks() {
        let p = DapParams::standard();
        let d = p.domain().clone();
        let mut t = MerkleTree::new(&p);
        for i in 0..16u64 {
            t.append(&p, d.from_u64(100 + i)).unwrap();
            for j in 0..=i as usize {
                let path = t.path(j).unwrap();
                assert!(merkle_check(&p, t.root(), &t.leaves()[j], &path), "leaf {j} after {i}");
            }
        }
        assert_eq!(t.append(&p, d.one()).unwrap_err(), DapError::TreeFull(16));
    }

    #[test]
    fn bits_follow_index() {
        let p = DapParams::standard();
        let d = p.domain().clone();
        let mut t = MerkleTree::new(&p);
        for i in 0..6 {
            t.append(&p, d.from_u64(i)).unwrap();
        }
        assert_eq!(t.path(5).unwrap().bits, [true, false, true, false]);
        assert_eq!(t.path(6).unwrap_err(), DapError::BadLeafIndex(6));
    }
}
