//! Fixed-layout binary encoding.
//!
//! All integers and floats are little-endian:
//!
//! ```text
//! "HGT1" | version u8 | flags u8 | bins u32
//! breaks  (bins + 1) x f64
//! counts  bins x u64
//! [flags & 1] order u8, then order x bins f64 power sums (all S_1, then all S_2, ...)
//! [flags & 2] name length u16, then UTF-8 bytes
//! CRC-32 (IEEE) of everything above, u32
//! ```

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::WireError;
use crate::histogram::{BinMoments, Histogram};

pub const MAGIC: [u8; 4] = *b"HGT1";
pub const VERSION: u8 = 1;
pub const FLAG_MOMENTS: u8 = 0b01;
pub const FLAG_NAME: u8 = 0b10;

const HEADER_LEN: usize = 4 + 1 + 1 + 4;

/// Exact encoded size for a histogram with `bins` bins, moment order
/// `order` (0 for none) and a name of `name_len` bytes (`None` for no name).
pub fn encoded_len(bins: usize, order: u8, name_len: Option<usize>) -> usize {
    let mut len = HEADER_LEN + (bins + 1) * 8 + bins * 8;
    if order > 0 {
        len += 1 + order as usize * bins * 8;
    }
    if let Some(n) = name_len {
        len += 2 + n;
    }
    len + 4
}

pub fn flags_for(h: &Histogram) -> u8 {
    let mut flags = 0;
    if h.moments().is_some() {
        flags |= FLAG_MOMENTS;
    }
    if h.name().is_some() {
        flags |= FLAG_NAME;
    }
    flags
}

pub fn encode(h: &Histogram) -> Vec<u8> {
    let bins = h.bins();
    let mut out = Vec::with_capacity(encoded_len(bins, h.moment_order(), h.name().map(str::len)));
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.push(flags_for(h));
    out.extend_from_slice(&(bins as u32).to_le_bytes());
    for b in h.breaks() {
        out.extend_from_slice(&b.to_le_bytes());
    }
    for c in h.counts() {
        out.extend_from_slice(&c.to_le_bytes());
    }
    if let Some(m) = h.moments() {
        out.push(m.order());
        for s in m.as_slice() {
            out.extend_from_slice(&s.to_le_bytes());
        }
    }
    if let Some(name) = h.name() {
        out.extend_from_slice(&(name.len() as u16).to_le_bytes());
        out.extend_from_slice(name.as_bytes());
    }
    let crc = crc32fast::hash(&out);
    out.extend_from_slice(&crc.to_le_bytes());
    out
}

struct Layout {
    bins: usize,
    order: u8,
    breaks_at: usize,
    counts_at: usize,
    sums_at: usize,
    name: Option<(usize, usize)>,
    crc_at: usize,
}

fn truncated(offset: usize) -> WireError {
    WireError::Truncated { offset }
}

fn read_u32(bytes: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(bytes[at..at + 4].try_into().expect("4 bytes"))
}

fn read_f64(bytes: &[u8], at: usize) -> f64 {
    f64::from_le_bytes(bytes[at..at + 8].try_into().expect("8 bytes"))
}

fn read_u64(bytes: &[u8], at: usize) -> u64 {
    u64::from_le_bytes(bytes[at..at + 8].try_into().expect("8 bytes"))
}

/// Walk the header fields, failing with `Truncated` as soon as a field the
/// walk needs lies past the end of `bytes`.
fn layout(bytes: &[u8]) -> Result<Layout, WireError> {
    let n = bytes.len();
    let magic_len = n.min(4);
    if bytes[..magic_len] != MAGIC[..magic_len] {
        return Err(WireError::Format("bad magic".into()));
    }
    if n < 5 {
        return Err(truncated(n));
    }
    if bytes[4] != VERSION {
        return Err(WireError::Format(alloc::format!("unsupported version {}", bytes[4])));
    }
    if n < 6 {
        return Err(truncated(n));
    }
    let flags = bytes[5];
    if flags & !(FLAG_MOMENTS | FLAG_NAME) != 0 {
        return Err(WireError::Format(alloc::format!("unknown flag bits {flags:#04x}")));
    }
    if n < HEADER_LEN {
        return Err(truncated(n));
    }
    let bins = read_u32(bytes, 6) as usize;
    let breaks_at = HEADER_LEN;
    let counts_at = bins
        .checked_add(1)
        .and_then(|b| b.checked_mul(8))
        .and_then(|len| breaks_at.checked_add(len))
        .ok_or_else(|| truncated(n))?;
    let mut cursor = counts_at.checked_add(bins * 8).ok_or_else(|| truncated(n))?;
    let mut order = 0;
    let mut sums_at = cursor;
    if flags & FLAG_MOMENTS != 0 {
        if cursor >= n {
            return Err(truncated(n));
        }
        order = bytes[cursor];
        sums_at = cursor + 1;
        cursor = (order as usize)
            .checked_mul(bins)
            .and_then(|c| c.checked_mul(8))
            .and_then(|len| sums_at.checked_add(len))
            .ok_or_else(|| truncated(n))?;
    }
    let mut name = None;
    if flags & FLAG_NAME != 0 {
        if cursor.checked_add(2).is_none_or(|end| end > n) {
            return Err(truncated(n));
        }
        let len = u16::from_le_bytes([bytes[cursor], bytes[cursor + 1]]) as usize;
        name = Some((cursor + 2, len));
        cursor += 2 + len;
    }
    Ok(Layout { bins, order, breaks_at, counts_at, sums_at, name, crc_at: cursor })
}

pub fn decode(bytes: &[u8]) -> Result<Histogram, WireError> {
    let lay = layout(bytes)?;
    let n = bytes.len();
    let end = lay.crc_at.checked_add(4).ok_or_else(|| truncated(n))?;
    if n < end {
        return Err(truncated(n));
    }
    let stored = read_u32(bytes, lay.crc_at);
    let computed = crc32fast::hash(&bytes[..lay.crc_at]);
    if stored != computed {
        return Err(WireError::Corrupted { stored, computed });
    }
    if n > end {
        return Err(WireError::Format(alloc::format!("{} trailing bytes", n - end)));
    }

    if lay.bins == 0 {
        return Err(WireError::InvalidContent("zero bins".into()));
    }
    let breaks = (0..=lay.bins).map(|i| read_f64(bytes, lay.breaks_at + 8 * i)).collect();
    let counts = (0..lay.bins).map(|i| read_u64(bytes, lay.counts_at + 8 * i)).collect();
    let invalid = |e: crate::error::HistError| WireError::InvalidContent(alloc::format!("{e}"));
    let moments = if bytes[5] & FLAG_MOMENTS != 0 {
        let sums = (0..lay.order as usize * lay.bins).map(|i| read_f64(bytes, lay.sums_at + 8 * i)).collect();
        Some(BinMoments::new(lay.order, lay.bins, sums).map_err(invalid)?)
    } else {
        None
    };
    let name = match lay.name {
        Some((at, len)) => Some(
            String::from_utf8(bytes[at..at + len].to_vec())
                .map_err(|_| WireError::InvalidContent("metric name is not UTF-8".into()))?,
        ),
        None => None,
    };
    Histogram::from_parts(breaks, counts, moments, name).map_err(invalid)
}
