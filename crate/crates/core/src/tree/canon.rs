//! Iterative AHU-style canonical labelling for rooted forests.
//!
//! Labels are assigned height by height. Within one height, nodes are ranked
//! by the sorted list of their children's labels, so a label comparison
//! reflects a fixed total order on isomorphism classes (height first, then
//! lexicographic child-label lists). That order does not depend on which
//! other classes happen to be present, so emitting children in label order
//! produces the same code for isomorphic trees across unrelated calls.
//!
//! Nothing here recurses: trees hanging off a functional graph of a million
//! vertices may be arbitrarily deep.

/// Children lists in compressed-row form.
pub(crate) struct Csr {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Csr {
    /// Build from a parent array. `None` marks nodes without a parent.
    pub(crate) fn from_parents(parents: &[Option<usize>]) -> Self {
        let n = parents.len();
        let mut counts = vec![0usize; n + 1];
        for p in parents.iter().flatten() {
            counts[*p + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let offsets = counts.clone();
        let mut fill = counts;
        let mut targets = vec![0usize; offsets[n]];
        for (v, p) in parents.iter().enumerate() {
            if let Some(p) = *p {
                targets[fill[p]] = v;
                fill[p] += 1;
            }
        }
        Csr { offsets, targets }
    }

    pub(crate) fn children(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub(crate) fn len(&self) -> usize {
        self.offsets.len() - 1
    }
}

pub(crate) struct Labelling {
    /// Canonical class label per node; `u32::MAX` for nodes not reachable
    /// from the requested roots.
    pub label: Vec<u32>,
}

/// Label every node reachable from `roots`.
pub(crate) fn label_forest(csr: &Csr, roots: &[usize]) -> Labelling {
    let n = csr.len();
    // Breadth-first order from the roots; parents precede children.
    let mut order = Vec::with_capacity(n);
    order.extend_from_slice(roots);
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        order.extend_from_slice(csr.children(v));
    }

    let mut height = vec![0u32; n];
    for &v in order.iter().rev() {
        height[v] = csr
            .children(v)
            .iter()
            .map(|&c| height[c] + 1)
            .max()
            .unwrap_or(0);
    }
    let max_h = order.iter().map(|&v| height[v]).max().unwrap_or(0) as usize;
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); max_h + 1];
    for &v in &order {
        buckets[height[v] as usize].push(v);
    }

    let mut label = vec![u32::MAX; n];
    let mut next = 0u32;
    for bucket in buckets {
        let mut keyed: Vec<(Vec<u32>, usize)> = bucket
            .into_iter()
            .map(|v| {
                let mut key: Vec<u32> = csr.children(v).iter().map(|&c| label[c]).collect();
                key.sort_unstable();
                (key, v)
            })
            .collect();
        keyed.sort_unstable();
        let mut prev: Option<&Vec<u32>> = None;
        for (key, v) in &keyed {
            if prev != Some(key) {
                if prev.is_some() {
                    next += 1;
                }
                prev = Some(key);
            }
            label[*v] = next;
        }
        if prev.is_some() {
            next += 1;
        }
    }
    Labelling { label }
}

/// Preorder child-count code of the subtree at `root`, children visited in
/// increasing label order.
pub(crate) fn emit(csr: &Csr, labels: &Labelling, root: usize) -> Vec<u32> {
    let mut code = Vec::new();
    let mut stack = vec![root];
    let mut kids: Vec<usize> = Vec::new();
    while let Some(v) = stack.pop() {
        kids.clear();
        kids.extend_from_slice(csr.children(v));
        kids.sort_unstable_by_key(|&c| labels.label[c]);
        code.push(kids.len() as u32);
        stack.extend(kids.iter().rev());
    }
    code
}

/// Parent array (preorder indices) of a preorder child-count code. Returns
/// `None` if the code is not a single well-formed tree.
pub(crate) fn parents_of_code(code: &[u32]) -> Option<Vec<Option<usize>>> {
    if code.is_empty() {
        return None;
    }
    let mut parents = Vec::with_capacity(code.len());
    // (node, children still to read)
    let mut stack: Vec<(usize, u32)> = Vec::new();
    for (i, &k) in code.iter().enumerate() {
        match stack.last_mut() {
            Some((p, remaining)) => {
                parents.push(Some(*p));
                *remaining -= 1;
                if *remaining == 0 {
                    stack.pop();
                }
            }
            None => {
                if i != 0 {
                    return None;
                }
                parents.push(None);
            }
        }
        if k > 0 {
            stack.push((i, k));
        }
    }
    if stack.is_empty() {
        Some(parents)
    } else {
        None
    }
}

/// Canonical code of an arbitrary (possibly non-canonical) preorder code.
pub(crate) fn canonicalize_code(code: &[u32]) -> Option<Vec<u32>> {
    let parents = parents_of_code(code)?;
    let csr = Csr::from_parents(&parents);
    let labels = label_forest(&csr, &[0]);
    Some(emit(&csr, &labels, 0))
}

/// Split a concatenation of well-formed codes into its top-level pieces.
pub(crate) fn split_codes(mut code: &[u32]) -> Vec<&[u32]> {
    let mut out = Vec::new();
    while !code.is_empty() {
        let mut need = 1u64;
        let mut i = 0;
        while need > 0 {
            need = need - 1 + code[i] as u64;
            i += 1;
        }
        out.push(&code[..i]);
        code = &code[i..];
    }
    out
}
