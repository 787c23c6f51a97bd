//! Textual break specifications used on the command line.
//!
//! * `0,1,2.5,10` explicit breaks
//! * `lin:start:stop:n` `n` equal bins from `start` to `stop`
//! * `log2:kmin:kmax` breaks `2^kmin ..= 2^kmax`

use histtools_core::BucketScheme;

#[derive(Debug, thiserror::Error)]
#[error("bad breaks spec `{spec}`: {reason}")]
pub struct BreaksSpecError {
    pub spec: String,
    pub reason: String,
}

fn err(spec: &str, reason: impl Into<String>) -> BreaksSpecError {
    BreaksSpecError { spec: spec.to_owned(), reason: reason.into() }
}

fn num<T: std::str::FromStr>(spec: &str, field: &str, text: &str) -> Result<T, BreaksSpecError> {
    text.trim().parse().map_err(|_| err(spec, format!("{field} `{text}` is not a valid number")))
}

pub fn parse_breaks_spec(spec: &str) -> Result<BucketScheme, BreaksSpecError> {
    let scheme = if let Some(rest) = spec.strip_prefix("lin:") {
        let parts: Vec<&str> = rest.split(':').collect();
        let [start, stop, n] = parts.as_slice() else {
            return Err(err(spec, "expected lin:start:stop:n"));
        };
        let start: f64 = num(spec, "start", start)?;
        let stop: f64 = num(spec, "stop", stop)?;
        let n: usize = num(spec, "n", n)?;
        if n == 0 {
            return Err(err(spec, "need at least one bin"));
        }
        // last break pinned to `stop` exactly
        let breaks =
            (0..=n).map(|i| if i == n { stop } else { start + (stop - start) * i as f64 / n as f64 }).collect();
        BucketScheme::Explicit(breaks)
    } else if let Some(rest) = spec.strip_prefix("log2:") {
        let parts: Vec<&str> = rest.split(':').collect();
        let [lo, hi] = parts.as_slice() else {
            return Err(err(spec, "expected log2:kmin:kmax"));
        };
        BucketScheme::PowerOfTwo { min_exponent: num(spec, "kmin", lo)?, max_exponent: num(spec, "kmax", hi)? }
    } else {
        let breaks = spec.split(',').map(|t| num::<f64>(spec, "break", t)).collect::<Result<Vec<_>, _>>()?;
        BucketScheme::Explicit(breaks)
    };
    scheme.breaks().map_err(|e| err(spec, e.to_string()))?;
    Ok(scheme)
}
