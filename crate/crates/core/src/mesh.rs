//! Structured triangulation of the rectangular fluid domain `[0, L] x [0, R]`.
//!
//! Nodes are numbered row by row from the bottom-left corner, so node
//! `(i, j)` (column `i`, row `j`) has index `j * (nx + 1) + i`. Every square
//! cell is split along its lower-left to upper-right diagonal.

use std::io::Write;

use crate::error::{FsiError, Result};

/// Default node cap, roughly 1.5 GB of fluid factorization at rate 5.
pub const DEFAULT_MAX_NODES: usize = 2_000_000;

/// Boundary segments of the rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundaryTag {
    /// `y = 0`, symmetry axis.
    Gamma1,
    /// `x = 0`, pressure inlet.
    Gamma2,
    /// `y = R`, fluid-structure interface.
    Sigma,
    /// `x = L`, zero-pressure outlet.
    Gamma4,
}

impl BoundaryTag {
    pub const ALL: [BoundaryTag; 4] = [
        BoundaryTag::Gamma1,
        BoundaryTag::Gamma2,
        BoundaryTag::Sigma,
        BoundaryTag::Gamma4,
    ];
}

/// Domain extent and base mesh size (CGS units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub length: f64,
    pub height: f64,
    /// Mesh size at refinement rate 0.
    pub base_h: f64,
}

impl Default for Geometry {
    fn default() -> Self {
        Geometry {
            length: 6.0,
            height: 0.5,
            base_h: 0.1,
        }
    }
}

impl Geometry {
    pub fn h(&self, rate: u32) -> f64 {
        self.base_h / f64::from(1u32 << rate)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub nodes: [usize; 2],
    pub tag: BoundaryTag,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructuredMesh {
    pub geometry: Geometry,
    pub rate: u32,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    pub nodes: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<BoundaryEdge>,
    /// Interface nodes ordered by ascending `x`.
    pub interface_nodes: Vec<usize>,
}

fn cell_count(extent: f64, h: f64) -> Result<usize> {
    let ratio = extent / h;
    let n = ratio.round();
    if n < 1.0 || (ratio - n).abs() > 1e-9 * n.max(1.0) {
        return Err(FsiError::IncommensurateMesh { length: extent, h });
    }
    Ok(n as usize)
}

impl StructuredMesh {
    /// Builds the default-geometry mesh at `rate` with the default node cap.
    pub fn new(rate: u32) -> Result<Self> {
        Self::build(Geometry::default(), rate, DEFAULT_MAX_NODES)
    }

    pub fn build(geometry: Geometry, rate: u32, max_nodes: usize) -> Result<Self> {
        if rate > 20 {
            return Err(FsiError::MeshTooLarge {
                rate,
                nodes: usize::MAX,
                cap: max_nodes,
            });
        }
        let h = geometry.h(rate);
        let nx = cell_count(geometry.length, h)?;
        let ny = cell_count(geometry.height, h)?;
        let n_nodes = (nx + 1) * (ny + 1);
        if n_nodes > max_nodes {
            return Err(FsiError::MeshTooLarge {
                rate,
                nodes: n_nodes,
                cap: max_nodes,
            });
        }

        // i / nx is correctly rounded, so coarse positions reappear bitwise
        // in every factor-2 refinement and the corners are exact.
        let mut nodes = Vec::with_capacity(n_nodes);
        for j in 0..=ny {
            let y = (j as f64 / ny as f64) * geometry.height;
            for i in 0..=nx {
                let x = (i as f64 / nx as f64) * geometry.length;
                nodes.push([x, y]);
            }
        }

        let id = |i: usize, j: usize| j * (nx + 1) + i;
        let mut triangles = Vec::with_capacity(2 * nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                let a = id(i, j);
                let b = id(i + 1, j);
                let c = id(i + 1, j + 1);
                let d = id(i, j + 1);
                triangles.push([a, b, c]);
                triangles.push([a, c, d]);
            }
        }

        let mut boundary_edges = Vec::with_capacity(2 * (nx + ny));
        for i in 0..nx {
            boundary_edges.push(BoundaryEdge {
                nodes: [id(i, 0), id(i + 1, 0)],
                tag: BoundaryTag::Gamma1,
            });
        }
        for j in 0..ny {
            boundary_edges.push(BoundaryEdge {
                nodes: [id(nx, j), id(nx, j + 1)],
                tag: BoundaryTag::Gamma4,
            });
        }
        for i in (0..nx).rev() {
            boundary_edges.push(BoundaryEdge {
                nodes: [id(i + 1, ny), id(i, ny)],
                tag: BoundaryTag::Sigma,
            });
        }
        for j in (0..ny).rev() {
            boundary_edges.push(BoundaryEdge {
                nodes: [id(0, j + 1), id(0, j)],
                tag: BoundaryTag::Gamma2,
            });
        }

        let interface_nodes = (0..=nx).map(|i| id(i, ny)).collect();

        Ok(StructuredMesh {
            geometry,
            rate,
            h,
            nx,
            ny,
            nodes,
            triangles,
            boundary_edges,
            interface_nodes,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_index(&self, i: usize, j: usize) -> usize {
        j * (self.nx + 1) + i
    }

    pub fn triangle_coords(&self, t: usize) -> [[f64; 2]; 3] {
        let [a, b, c] = self.triangles[t];
        [self.nodes[a], self.nodes[b], self.nodes[c]]
    }

    /// Segment owning a boundary node for the purpose of applying boundary
    /// conditions. Corners go to the Dirichlet-dominant segment: the
    /// interface endpoints belong to `Sigma`, the bottom corners to `Gamma1`.
    pub fn node_tag(&self, node: usize) -> Option<BoundaryTag> {
        let i = node % (self.nx + 1);
        let j = node / (self.nx + 1);
        if j == self.ny {
            Some(BoundaryTag::Sigma)
        } else if j == 0 {
            Some(BoundaryTag::Gamma1)
        } else if i == 0 {
            Some(BoundaryTag::Gamma2)
        } else if i == self.nx {
            Some(BoundaryTag::Gamma4)
        } else {
            None
        }
    }

    pub fn edges_with_tag(&self, tag: BoundaryTag) -> impl Iterator<Item = &BoundaryEdge> {
        self.boundary_edges.iter().filter(move |e| e.tag == tag)
    }

    /// Interface nodes paired with their `x` coordinate, ascending in `x`.
    pub fn interface_submesh(&self) -> Vec<(usize, f64)> {
        self.interface_nodes
            .iter()
            .map(|&n| (n, self.nodes[n][0]))
            .collect()
    }

    /// Plain-text listing: one `x y` line per node, then one `i j k` line
    /// per triangle (zero-based).
    pub fn write_listing<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for [x, y] in &self.nodes {
            writeln!(out, "{x} {y}")?;
        }
        for [a, b, c] in &self.triangles {
            writeln!(out, "{a} {b} {c}")?;
        }
        Ok(())
    }
}
