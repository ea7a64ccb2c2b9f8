//! Angle literals such as `7pi/16`, `-pi/4`, `0.3` and grids `start:stop:count`.

use std::f64::consts::PI;

fn parse_number(text: &str) -> Result<f64, String> {
    let t = text.trim();
    t.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("invalid number '{t}'"))
}

/// Parses `[coef][*]pi[/den]` or a plain number, optionally over a denominator.
pub fn parse_angle(text: &str) -> Result<f64, String> {
    let t: String = text.split_whitespace().collect::<String>().to_lowercase().replace('π', "pi");
    if t.is_empty() {
        return Err("empty angle".into());
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, Some(parse_number(d)?)),
        None => (t.as_str(), None),
    };
    let value = match num.split_once("pi") {
        Some((coef, rest)) => {
            if !rest.is_empty() {
                return Err(format!("unexpected '{rest}' after pi in '{text}'"));
            }
            let coef = coef.strip_suffix('*').unwrap_or(coef);
            let c = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => parse_number(c)?,
            };
            c * PI
        }
        None => parse_number(num)?,
    };
    match den {
        Some(d) if d == 0.0 => Err(format!("zero denominator in '{text}'")),
        Some(d) => Ok(value / d),
        None => Ok(value),
    }
}

/// θ grid parsed from `start:stop:count`; a count of 1 keeps only `start`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        crate::spectra::uniform_grid(self.start, self.stop, self.count)
    }
}

impl std::fmt::Display for GridSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:.16e}:{:.16e}:{}", self.start, self.stop, self.count)
    }
}

pub fn parse_grid(text: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(format!("grid '{text}' is not start:stop:count"));
    };
    let count: usize = n
        .trim()
        .parse()
        .map_err(|_| format!("invalid grid count '{n}'"))?;
    if count == 0 {
        return Err("grid needs at least one point".into());
    }
    let (start, stop) = (parse_angle(a)?, parse_angle(b)?);
    if stop < start {
        return Err(format!("grid stop {stop} precedes start {start}"));
    }
    Ok(GridSpec { start, stop, count })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_expressions() {
        let cases = [
            ("pi/2", PI / 2.0),
            ("7pi/16", 7.0 * PI / 16.0),
            ("7*pi/16", 7.0 * PI / 16.0),
            ("-pi/4", -PI / 4.0),
            ("pi", PI),
            ("2pi", 2.0 * PI),
            ("0.25", 0.25),
            ("1/4", 0.25),
            ("π/3", PI / 3.0),
        ];
        for (s, v) in cases {
            assert!((parse_angle(s).unwrap() - v).abs() < 1e-15, "{s}");
        }
        for bad in ["", "pi2", "x", "pi/0", "1/"] {
            assert!(parse_angle(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn grids() {
        let g = parse_grid("0:pi/2:200").unwrap();
        assert_eq!(g.count, 200);
        assert!((g.stop - PI / 2.0).abs() < 1e-15);
        assert_eq!(parse_grid("pi/4:pi/4:1").unwrap().points(), vec![PI / 4.0]);
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("1:0:5").is_err());
        assert!(parse_grid("0:1").is_err());
    }
}
