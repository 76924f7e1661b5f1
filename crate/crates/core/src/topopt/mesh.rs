use alloc::vec::Vec;

/// Regular quad mesh with column-major numbering: element `e = elx * nely + ely`,
/// node `n = ix * (nely + 1) + iy`, with `iy = 0` on the top row. Elastic dofs
/// are `2n` (x) and `2n + 1` (y, positive down the grid).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mesh {
    pub nelx: usize,
    pub nely: usize,
}

impl Mesh {
    pub fn new(nelx: usize, nely: usize) -> Self {
        assert!(nelx > 0 && nely > 0, "mesh needs at least one element");
        Self { nelx, nely }
    }

    pub fn n_elements(&self) -> usize {
        self.nelx * self.nely
    }

    pub fn n_nodes(&self) -> usize {
        (self.nelx + 1) * (self.nely + 1)
    }

    pub fn n_dofs(&self) -> usize {
        2 * self.n_nodes()
    }

    pub fn element(&self, elx: usize, ely: usize) -> usize {
        elx * self.nely + ely
    }

    /// `(elx, ely)` of an element index.
    pub fn element_position(&self, e: usize) -> (usize, usize) {
        (e / self.nely, e % self.nely)
    }

    pub fn node(&self, ix: usize, iy: usize) -> usize {
        ix * (self.nely + 1) + iy
    }

    /// Element nodes in the order upper-left, upper-right, lower-right, lower-left.
    pub fn element_nodes(&self, e: usize) -> [usize; 4] {
        let (elx, ely) = self.element_position(e);
        let n1 = self.node(elx, ely);
        let n2 = self.node(elx + 1, ely);
        [n1, n2, n2 + 1, n1 + 1]
    }

    pub fn element_dofs(&self, e: usize) -> [usize; 8] {
        let [a, b, c, d] = self.element_nodes(e);
        [2 * a, 2 * a + 1, 2 * b, 2 * b + 1, 2 * c, 2 * c + 1, 2 * d, 2 * d + 1]
    }

    /// Complement of `fixed` within `0..n`, `fixed` need not be sorted.
    pub fn free_indices(n: usize, fixed: &[usize]) -> Vec<usize> {
        let mut mask = alloc::vec![false; n];
        for &f in fixed {
            mask[f] = true;
        }
        (0..n).filter(|&i| !mask[i]).collect()
    }
}
