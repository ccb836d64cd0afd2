use std::io::{self, Write};

use super::mesh::SurfaceMesh;

/// Wavefront OBJ in ball coordinates, nine significant digits.
pub fn write_obj<W: Write>(mesh: &SurfaceMesh, mut w: W) -> io::Result<()> {
    writeln!(w, "# {} vertices, {} faces, Poincare ball coordinates", mesh.positions.len(), mesh.faces.len())?;
    for [x, y, z] in mesh.ball_positions() {
        writeln!(w, "v {x:.8e} {y:.8e} {z:.8e}")?;
    }
    for f in &mesh.faces {
        writeln!(w, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
    }
    w.flush()
}

/// Binary little-endian PLY with `float64` positions and, when
/// `with_quality` is set, a per-vertex `quality` = log₁₀ of the
/// `ω·dg − Q̂` relative residual.
pub fn write_ply<W: Write>(mesh: &SurfaceMesh, with_quality: bool, mut w: W) -> io::Result<()> {
    let mut header = String::from("ply\nformat binary_little_endian 1.0\n");
    header += &format!("element vertex {}\n", mesh.positions.len());
    header += "property double x\nproperty double y\nproperty double z\n";
    if with_quality {
        header += "property double quality\n";
    }
    header += &format!("element face {}\n", mesh.faces.len());
    header += "property list uchar int vertex_indices\nend_header\n";
    w.write_all(header.as_bytes())?;
    for (i, p) in mesh.positions.iter().enumerate() {
        for c in p.ball {
            w.write_all(&c.to_le_bytes())?;
        }
        if with_quality {
            let r = mesh.diagnostics.get(i).map_or(f64::NAN, |d| d.hopf_residual);
            // an exact zero residual is floored at the smallest normal double
            w.write_all(&r.max(f64::MIN_POSITIVE).log10().to_le_bytes())?;
        }
    }
    for f in &mesh.faces {
        w.write_all(&[3u8])?;
        for &i in f {
            let i = i32::try_from(i).map_err(|_| io::Error::new(io::ErrorKind::InvalidData, "vertex index overflows int"))?;
            w.write_all(&i.to_le_bytes())?;
        }
    }
    w.flush()
}

/// `t,x,y` rows of a profile polyline.
pub fn write_profile_csv<W: Write>(points: &[(f64, [f64; 2])], mut w: W) -> io::Result<()> {
    writeln!(w, "t,x,y")?;
    for (t, [x, y]) in points {
        writeln!(w, "{t:.10e},{x:.10e},{y:.10e}")?;
    }
    w.flush()
}
