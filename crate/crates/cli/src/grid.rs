//! Grid specifications for parameter sweeps: `a,b,c` (or `list:a,b,c`),
//! `lin:LO:HI:N` for `N` evenly spaced values, and `log:LO:HI:N` for `N` values
//! `10^x` with exponents evenly spaced between `LO` and `HI`.

use anyhow::{bail, Context, Result};

pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let spec = spec.trim();
    let number = |s: &str| -> Result<f64> {
        let v: f64 = s.trim().parse().with_context(|| format!("{s:?} is not a number in grid {spec:?}"))?;
        if !v.is_finite() {
            bail!("grid {spec:?} contains a non-finite value");
        }
        Ok(v)
    };
    let spaced = |rest: &str, log: bool| -> Result<Vec<f64>> {
        let parts: Vec<&str> = rest.split(':').collect();
        let [lo, hi, n] = parts[..] else { bail!("grid {spec:?} should look like LO:HI:N") };
        let (lo, hi) = (number(lo)?, number(hi)?);
        let n: usize = n.trim().parse().with_context(|| format!("point count {n:?} in grid {spec:?}"))?;
        if n == 0 {
            bail!("grid {spec:?} has no points");
        }
        if n == 1 && lo != hi {
            bail!("grid {spec:?} needs at least 2 points to span [{lo}, {hi}]");
        }
        Ok((0..n)
            .map(|i| {
                let x = if n == 1 { lo } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 };
                if log {
                    10f64.powf(x)
                } else {
                    x
                }
            })
            .collect())
    };
    let values = if let Some(rest) = spec.strip_prefix("lin:") {
        spaced(rest, false)?
    } else if let Some(rest) = spec.strip_prefix("log:") {
        spaced(rest, true)?
    } else {
        let list = spec.strip_prefix("list:").unwrap_or(spec);
        list.split(',').map(number).collect::<Result<Vec<_>>>()?
    };
    if values.is_empty() {
        bail!("grid {spec:?} is empty");
    }
    Ok(values)
}

/// Grid of ray counts; every value must be an integer `>= 2`.
pub fn parse_m_grid(spec: &str) -> Result<Vec<usize>> {
    parse_grid(spec)?
        .into_iter()
        .map(|v| {
            if v.fract() != 0.0 || v < 2.0 {
                bail!("ray counts must be integers >= 2, got {v} in {spec:?}");
            }
            Ok(v as usize)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!(parse_grid("1,2.5, 4").unwrap(), vec![1.0, 2.5, 4.0]);
        assert_eq!(parse_grid("list:7").unwrap(), vec![7.0]);
        assert_eq!(parse_grid("lin:1:3:5").unwrap(), vec![1.0, 1.5, 2.0, 2.5, 3.0]);
        assert_eq!(parse_grid("log:2:4:3").unwrap(), vec![100.0, 1000.0, 10000.0]);
        assert_eq!(parse_m_grid("lin:3:6:4").unwrap(), vec![3, 4, 5, 6]);
    }

    #[test]
    fn rejects_bad_specs() {
        for bad in ["", "lin:1:2", "log:1:2:0", "lin:1:2:1", "x,1", "inf", "lin:a:2:3"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
        assert!(parse_m_grid("2.5").is_err());
        assert!(parse_m_grid("1").is_err());
    }
}
