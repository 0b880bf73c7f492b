//! Union-find with undo, for backtracking searches.

use alloc::vec::Vec;

#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    // merged roots, or None for a no-op union
    history: Vec<Option<(usize, usize)>>,
    components: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: alloc::vec![1; n],
            history: Vec::new(),
            components: n,
        }
    }

    pub fn components(&self) -> usize {
        self.components
    }

    // no path compression so that rollback stays exact
    pub fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    pub fn same(&self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Merges the classes of `a` and `b`; returns false if they were already
    /// joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            self.history.push(None);
            return false;
        }
        let (child, root) = if self.size[ra] < self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[child] = root;
        self.size[root] += self.size[child];
        self.components -= 1;
        self.history.push(Some((child, root)));
        true
    }

    pub fn snapshot(&self) -> usize {
        self.history.len()
    }

    pub fn rollback(&mut self, snapshot: usize) {
        while self.history.len() > snapshot {
            if let Some((child, root)) = self.history.pop().flatten() {
                self.parent[child] = child;
                self.size[root] -= self.size[child];
                self.components += 1;
            }
        }
    }
}
