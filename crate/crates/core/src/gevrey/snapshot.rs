//! Binary field snapshots.
//!
//! Layout, all little-endian: the magic `GVRYFLD1`; a geometry tag byte
//! (0 = T², 1 = T³, 2 = slab) and the slab depth as `f64`; the box shape as
//! three `u32`; `K_max` and the component count as `u32`; the time as `f64`;
//! one parity byte per component (0 = even, 1 = odd); then for each
//! component every coefficient in row-major storage order as `(re, im)`
//! pairs of `f64`.

use std::io::{Read, Write};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use num_complex::Complex64;

use super::field::{Geometry, Parity, SpectralField};
use crate::error::{Error, Result};

const MAGIC: &[u8; 8] = b"GVRYFLD1";

pub fn write_snapshot<W: Write>(mut w: W, v: &SpectralField) -> Result<()> {
    w.write_all(MAGIC)?;
    let (tag, depth) = match v.geometry() {
        Geometry::Torus2 => (0u8, 0.0),
        Geometry::Torus3 => (1, 0.0),
        Geometry::Slab { depth } => (2, depth),
    };
    w.write_u8(tag)?;
    w.write_f64::<LittleEndian>(depth)?;
    for n in v.shape() {
        w.write_u32::<LittleEndian>(n as u32)?;
    }
    w.write_u32::<LittleEndian>(v.k_max() as u32)?;
    w.write_u32::<LittleEndian>(v.components() as u32)?;
    w.write_f64::<LittleEndian>(v.time())?;
    for &p in v.parities() {
        w.write_u8(if p == Parity::Even { 0 } else { 1 })?;
    }
    for c in 0..v.components() {
        for z in v.coeffs(c) {
            w.write_f64::<LittleEndian>(z.re)?;
            w.write_f64::<LittleEndian>(z.im)?;
        }
    }
    Ok(())
}

pub fn read_snapshot<R: Read>(mut r: R) -> Result<SpectralField> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format("missing snapshot magic".into()));
    }
    let tag = r.read_u8()?;
    let depth = r.read_f64::<LittleEndian>()?;
    let geometry = match tag {
        0 => Geometry::Torus2,
        1 => Geometry::Torus3,
        2 => Geometry::Slab { depth },
        t => return Err(Error::Format(format!("unknown geometry tag {t}"))),
    };
    let mut shape = [0usize; 3];
    for n in shape.iter_mut() {
        *n = r.read_u32::<LittleEndian>()? as usize;
    }
    let _k_max = r.read_u32::<LittleEndian>()?;
    let ncomp = r.read_u32::<LittleEndian>()? as usize;
    if ncomp == 0 || ncomp > 3 {
        return Err(Error::Format(format!("implausible component count {ncomp}")));
    }
    let time = r.read_f64::<LittleEndian>()?;
    let mut parities = Vec::with_capacity(ncomp);
    for _ in 0..ncomp {
        parities.push(match r.read_u8()? {
            0 => Parity::Even,
            1 => Parity::Odd,
            p => return Err(Error::Format(format!("unknown parity tag {p}"))),
        });
    }
    let mut v = SpectralField::zeros(geometry, shape, parities)?;
    v.set_time(time);
    for c in 0..ncomp {
        for z in v.coeffs_mut(c) {
            let re = r.read_f64::<LittleEndian>()?;
            let im = r.read_f64::<LittleEndian>()?;
            *z = Complex64::new(re, im);
        }
    }
    Ok(v)
}

pub fn save(path: &std::path::Path, v: &SpectralField) -> Result<()> {
    let f = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(f);
    write_snapshot(&mut w, v)?;
    w.flush()?;
    Ok(())
}

pub fn load(path: &std::path::Path) -> Result<SpectralField> {
    let f = std::fs::File::open(path)?;
    read_snapshot(std::io::BufReader::new(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let mut v = SpectralField::vector(Geometry::Slab { depth: 2.0 }, [8, 8, 16]).unwrap();
        v.add_cos(0, [1, 0, 2], 0.3).unwrap();
        v.add_sin(2, [0, 1, 3], 0.7).unwrap();
        v.set_time(1.25);
        let mut buf = Vec::new();
        write_snapshot(&mut buf, &v).unwrap();
        assert_eq!(buf.len(), 8 + 1 + 8 + 12 + 8 + 8 + 3 + 3 * 8 * 8 * 16 * 16);
        let back = read_snapshot(buf.as_slice()).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(read_snapshot(&b"NOTAFILE........"[..]), Err(Error::Format(_))));
        assert!(read_snapshot(&b"GVRY"[..]).is_err());
    }
}
