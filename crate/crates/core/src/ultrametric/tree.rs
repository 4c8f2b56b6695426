use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::cluster::{agglomerate, Linkage};
use super::{ultrametric_values, DissimilarityMap, Ultrametric};
use crate::error::{Error, Result};

/// Heights closer than this are treated as one multifurcating node.
pub const DEFAULT_TIE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct TreeNode {
    pub children: Vec<usize>,
    pub height: f64,
    /// 0-based leaf index for leaves.
    pub leaf: Option<usize>,
}

/// Rooted tree with all leaves at height 0. Nodes `0..m` are the leaves.
#[derive(Debug, Clone, PartialEq)]
pub struct EquidistantTree {
    nodes: Vec<TreeNode>,
    root: usize,
    m: usize,
}

impl EquidistantTree {
    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn leaves(&self) -> usize {
        self.m
    }

    pub fn height(&self) -> f64 {
        self.nodes[self.root].height
    }

    pub fn is_binary(&self) -> bool {
        self.nodes
            .iter()
            .all(|n| n.leaf.is_some() || n.children.len() == 2)
    }

    fn min_leaf(&self, n: usize) -> usize {
        match self.nodes[n].leaf {
            Some(l) => l,
            None => self.nodes[n]
                .children
                .iter()
                .map(|&c| self.min_leaf(c))
                .min()
                .unwrap_or(usize::MAX),
        }
    }

    /// Children sorted by smallest leaf, which makes labels canonical.
    pub fn sorted_children(&self, n: usize) -> Vec<usize> {
        let mut cs = self.nodes[n].children.clone();
        cs.sort_by_key(|&c| self.min_leaf(c));
        cs
    }

    pub fn topology(&self) -> TreeTopology {
        let mut s = String::new();
        self.write_label(self.root, &mut s);
        TreeTopology(s)
    }

    fn write_label(&self, n: usize, out: &mut String) {
        if let Some(l) = self.nodes[n].leaf {
            out.push_str(&(l + 1).to_string());
            return;
        }
        out.push('(');
        for (k, c) in self.sorted_children(n).into_iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            self.write_label(c, out);
        }
        out.push(')');
    }
}

/// Leaf-labelled shape of a tree in nested-set normal form, e.g. `(1,(2,3))`.
/// Leaves are labelled `1..=m`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreeTopology(String);

impl TreeTopology {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for TreeTopology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

enum Sub {
    Leaf(usize),
    Inner(Box<Pending>),
}

struct Pending {
    children: Vec<Sub>,
    height: f64,
}

/// Equidistant tree realizing `u`: single-linkage merges at half the merge
/// distance, with nodes whose heights agree within `tol` collapsed.
pub fn tree_from_ultrametric(u: &DissimilarityMap, tol: f64) -> Result<EquidistantTree> {
    let m = u.leaves();
    if !ultrametric_values(m, u.values(), tol) {
        return Err(Error::NotUltrametric { tol });
    }
    let merges = agglomerate(m, u.values(), Linkage::Single);
    let mut slots: Vec<Option<Sub>> = (0..m).map(|i| Some(Sub::Leaf(i))).collect();
    for mg in &merges {
        let height = mg.dist / 2.0;
        let mut children = Vec::new();
        for side in [mg.a, mg.b] {
            match slots[side].take().expect("active cluster") {
                Sub::Inner(p) if height - p.height <= tol => children.extend(p.children),
                other => children.push(other),
            }
        }
        slots[mg.a] = Some(Sub::Inner(Box::new(Pending { children, height })));
    }

    let mut nodes: Vec<TreeNode> = (0..m)
        .map(|i| TreeNode {
            children: Vec::new(),
            height: 0.0,
            leaf: Some(i),
        })
        .collect();
    let top = slots[0].take().expect("root cluster");
    let root = flatten(top, &mut nodes);
    Ok(EquidistantTree { nodes, root, m })
}

fn flatten(sub: Sub, nodes: &mut Vec<TreeNode>) -> usize {
    match sub {
        Sub::Leaf(i) => i,
        Sub::Inner(p) => {
            let children = p.children.into_iter().map(|c| flatten(c, nodes)).collect();
            nodes.push(TreeNode {
                children,
                height: p.height,
                leaf: None,
            });
            nodes.len() - 1
        }
    }
}

pub fn topology_of(u: &Ultrametric, tie_tol: f64) -> Result<TreeTopology> {
    Ok(tree_from_ultrametric(u.as_map(), tie_tol)?.topology())
}

/// Counts per topology, in label order.
pub fn topology_histogram(
    samples: &[Ultrametric],
    tie_tol: f64,
) -> Result<BTreeMap<TreeTopology, usize>> {
    let mut h = BTreeMap::new();
    for u in samples {
        *h.entry(topology_of(u, tie_tol)?).or_insert(0) += 1;
    }
    Ok(h)
}

/// `(2m - 3)!!`, the number of rooted binary leaf-labelled trees.
pub fn rooted_binary_topologies(m: usize) -> u64 {
    (1..m.saturating_sub(1) as u64).map(|k| 2 * k + 1).product()
}
