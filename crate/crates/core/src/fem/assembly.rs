use crate::error::{FsiError, Result};
use crate::fem::element::P1Triangle;
use crate::fem::sparse::CsrMatrix;
use crate::mesh::StructuredMesh;

/// Which unknowns live on each node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldLayout {
    /// `u_x, u_y, p` per node.
    Fluid,
    /// One scalar per node (transverse displacement, pressure-only tests).
    Scalar,
}

impl FieldLayout {
    pub fn components(self) -> usize {
        match self {
            FieldLayout::Fluid => 3,
            FieldLayout::Scalar => 1,
        }
    }
}

pub const UX: usize = 0;
pub const UY: usize = 1;
pub const P: usize = 2;

/// Interleaved node-major numbering: `dof = node * components + component`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DofMap {
    pub n_nodes: usize,
    pub layout: FieldLayout,
}

impl DofMap {
    pub fn new(n_nodes: usize, layout: FieldLayout) -> Self {
        DofMap { n_nodes, layout }
    }

    pub fn components(&self) -> usize {
        self.layout.components()
    }

    pub fn n_dofs(&self) -> usize {
        self.n_nodes * self.components()
    }

    pub fn index(&self, node: usize, component: usize) -> usize {
        debug_assert!(component < self.components());
        node * self.components() + component
    }

    pub fn node_of(&self, dof: usize) -> (usize, usize) {
        (dof / self.components(), dof % self.components())
    }
}

/// Dense element matrix over `(local node, component)` pairs.
#[derive(Debug, Clone)]
pub struct LocalMatrix {
    nc: usize,
    data: Vec<f64>,
}

impl LocalMatrix {
    fn new(nc: usize) -> Self {
        LocalMatrix {
            nc,
            data: vec![0.0; 9 * nc * nc],
        }
    }

    fn clear(&mut self) {
        self.data.iter_mut().for_each(|v| *v = 0.0);
    }

    #[inline]
    pub fn add(&mut self, a: usize, ca: usize, b: usize, cb: usize, v: f64) {
        let n = 3 * self.nc;
        self.data[(a * self.nc + ca) * n + b * self.nc + cb] += v;
    }

    /// Adds a 3x3 node block between components `ca` (rows) and `cb` (columns).
    pub fn add_block(&mut self, ca: usize, cb: usize, block: &[[f64; 3]; 3], scale: f64) {
        for (a, row) in block.iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                self.add(a, ca, b, cb, scale * v);
            }
        }
    }
}

fn node_adjacency(mesh: &StructuredMesh) -> Vec<Vec<usize>> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::with_capacity(7); mesh.n_nodes()];
    for tri in &mesh.triangles {
        for &a in tri {
            for &b in tri {
                adj[a].push(b);
            }
        }
    }
    for row in &mut adj {
        row.sort_unstable();
        row.dedup();
    }
    adj
}

/// All-component coupling pattern between neighbouring nodes.
pub fn sparsity_pattern(mesh: &StructuredMesh, dofs: &DofMap) -> CsrMatrix {
    let nc = dofs.components();
    let adj = node_adjacency(mesh);
    let mut rows = Vec::with_capacity(dofs.n_dofs());
    for neighbours in &adj {
        let cols: Vec<usize> = neighbours
            .iter()
            .flat_map(|&m| (0..nc).map(move |c| m * nc + c))
            .collect();
        for _ in 0..nc {
            rows.push(cols.clone());
        }
    }
    CsrMatrix::from_pattern(dofs.n_dofs(), &rows)
}

/// Sums element contributions over all triangles in mesh order. The rule is
/// called once per triangle with a zeroed local matrix. Entries that end up
/// exactly zero are not stored.
pub fn assemble<F>(mesh: &StructuredMesh, dofs: &DofMap, mut rule: F) -> Result<CsrMatrix>
where
    F: FnMut(usize, &P1Triangle, &mut LocalMatrix),
{
    if dofs.n_nodes != mesh.n_nodes() {
        return Err(FsiError::DimensionMismatch {
            expected: mesh.n_nodes(),
            actual: dofs.n_nodes,
        });
    }
    let nc = dofs.components();
    let mut global = sparsity_pattern(mesh, dofs);
    let mut local = LocalMatrix::new(nc);
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let elem = P1Triangle::new(mesh.triangle_coords(t))?;
        local.clear();
        rule(t, &elem, &mut local);
        let n = 3 * nc;
        for a in 0..3 {
            for ca in 0..nc {
                let row = dofs.index(tri[a], ca);
                for b in 0..3 {
                    for cb in 0..nc {
                        let v = local.data[(a * nc + ca) * n + b * nc + cb];
                        if v != 0.0 {
                            global.add_to(row, dofs.index(tri[b], cb), v)?;
                        }
                    }
                }
            }
        }
    }
    global.prune_zeros();
    Ok(global)
}

/// Element-wise load vector assembly; the rule fills `[node][component]`.
pub fn assemble_vector<F>(mesh: &StructuredMesh, dofs: &DofMap, mut rule: F) -> Result<Vec<f64>>
where
    F: FnMut(usize, &P1Triangle, &mut [[f64; 3]; 3]),
{
    let nc = dofs.components();
    let mut out = vec![0.0; dofs.n_dofs()];
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let elem = P1Triangle::new(mesh.triangle_coords(t))?;
        let mut local = [[0.0; 3]; 3];
        rule(t, &elem, &mut local);
        for a in 0..3 {
            for c in 0..nc {
                out[dofs.index(tri[a], c)] += local[a][c];
            }
        }
    }
    Ok(out)
}
