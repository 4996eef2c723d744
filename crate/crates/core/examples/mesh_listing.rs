//! Builds the channel mesh at a refinement rate and writes the plain-text
//! node/triangle listing.
//!
//! cargo run --example mesh_listing -- [rate] [out_file]

use std::fs::File;
use std::io::BufWriter;

use jagged_fsi::mesh::{BoundaryTag, StructuredMesh};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let rate: u32 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0);
    let mesh = StructuredMesh::new(rate)?;
    println!(
        "rate {rate}: h = {}, {} x {} cells, {} nodes, {} triangles",
        mesh.h,
        mesh.nx,
        mesh.ny,
        mesh.n_nodes(),
        mesh.triangles.len()
    );
    for tag in BoundaryTag::ALL {
        println!("  {tag:?}: {} edges", mesh.edges_with_tag(tag).count());
    }
    println!("  interface nodes: {}", mesh.interface_nodes.len());

    if let Some(path) = args.next() {
        mesh.write_listing(BufWriter::new(File::create(&path)?))?;
        println!("listing written to {path}");
    }
    Ok(())
}
