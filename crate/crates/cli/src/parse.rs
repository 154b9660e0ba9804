//! Parsers for the CLI's numeric arguments, with byte positions in errors.

use teich_core::{MeasuredFoliation, Slope, TorusPoint};

/// A parse failure carrying the byte offset of the offending token.
#[derive(Debug)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "at byte {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        position,
        message: message.into(),
    })
}

/// Parses a number or a fraction `p/q`.
fn parse_coeff(s: &str, pos: usize) -> Result<f64, ParseError> {
    if let Some((num, den)) = s.split_once('/') {
        let n: f64 = if num.is_empty() {
            1.0
        } else {
            num.parse()
                .or_else(|_| err(pos, format!("invalid numerator `{num}`")))?
        };
        let d: f64 = den
            .parse()
            .or_else(|_| err(pos + num.len() + 1, format!("invalid denominator `{den}`")))?;
        if d == 0.0 {
            return err(pos + num.len() + 1, "denominator is zero");
        }
        Ok(n / d)
    } else if s.is_empty() {
        Ok(1.0)
    } else {
        s.parse()
            .or_else(|_| err(pos, format!("invalid number `{s}`")))
    }
}

/// Parses a point of the upper half-plane written as `re+im i`, e.g. `i`,
/// `2i`, `1+2i`, `3+i/2`, `-0.5+0.25i`.
pub fn parse_tau(input: &str) -> Result<TorusPoint, ParseError> {
    let s = input.trim();
    if s.is_empty() {
        return err(0, "empty value");
    }
    // Split into signed terms.
    let mut terms: Vec<(usize, String)> = Vec::new();
    let mut current = String::new();
    let mut start = 0usize;
    for (idx, ch) in s.char_indices() {
        if (ch == '+' || ch == '-')
            && idx != 0
            && !matches!(&s[..idx].chars().last(), Some('e') | Some('E'))
        {
            terms.push((start, std::mem::take(&mut current)));
            start = idx;
            if ch == '-' {
                current.push('-');
            }
        } else if !ch.is_whitespace() {
            current.push(ch);
        }
    }
    terms.push((start, current));

    let mut re = 0.0f64;
    let mut im = 0.0f64;
    let mut seen_im = false;
    for (pos, term) in &terms {
        if term.is_empty() {
            return err(*pos, "empty term");
        }
        if let Some(stripped) = strip_imaginary(term) {
            if seen_im {
                return err(*pos, "more than one imaginary term");
            }
            seen_im = true;
            let (sign, body) = split_sign(&stripped);
            im = sign * parse_coeff(&body, *pos)?;
        } else {
            let (sign, body) = split_sign(term);
            re += sign * parse_coeff(&body, *pos)?;
        }
    }
    if !seen_im {
        return err(
            0,
            format!("`{s}` has no imaginary part; points must lie in the upper half-plane"),
        );
    }
    TorusPoint::new(re, im).or_else(|_| err(0, format!("`{s}` is not in the upper half-plane")))
}

/// Removes the `i` marker from an imaginary term, keeping the coefficient
/// text: `2i -> 2`, `i -> ``, `i/2 -> /2`, `3i/2 -> 3/2`.
fn strip_imaginary(term: &str) -> Option<String> {
    let count = term.matches('i').count();
    if count != 1 {
        return None;
    }
    Some(term.replacen('i', "", 1))
}

fn split_sign(term: &str) -> (f64, String) {
    if let Some(rest) = term.strip_prefix('-') {
        (-1.0, rest.to_string())
    } else if let Some(rest) = term.strip_prefix('+') {
        (1.0, rest.to_string())
    } else {
        (1.0, term.to_string())
    }
}

/// Parses a boundary slope: a float, a fraction `p/q`, or `inf`.
pub fn parse_slope(input: &str) -> Result<Slope, ParseError> {
    let s = input.trim();
    match s {
        "" => err(0, "empty slope"),
        "inf" | "Inf" | "INF" | "oo" | "∞" => Ok(Slope::infinity()),
        _ => {
            if let Some((p, q)) = s.split_once('/') {
                if let (Ok(pn), Ok(qn)) = (p.parse::<i64>(), q.parse::<i64>()) {
                    if qn == 0 {
                        return Ok(Slope::infinity());
                    }
                    return Ok(Slope::from_rational(pn, qn));
                }
            }
            s.parse::<f64>()
                .map(Slope::new)
                .or_else(|_| err(0, format!("invalid slope `{s}`")))
        }
    }
}

/// Parses a measured foliation written as `a,b`.
pub fn parse_foliation(input: &str) -> Result<MeasuredFoliation, ParseError> {
    let s = input.trim();
    let (a, b) = s.split_once(',').ok_or_else(|| ParseError {
        position: 0,
        message: format!("expected `a,b`, got `{s}`"),
    })?;
    let av: f64 = a
        .trim()
        .parse()
        .or_else(|_| err(0, format!("invalid weight `{a}`")))?;
    let bv: f64 = b
        .trim()
        .parse()
        .or_else(|_| err(a.len() + 1, format!("invalid weight `{b}`")))?;
    let f = MeasuredFoliation::new(av, bv);
    if f.is_zero() {
        return err(0, "the zero foliation is not a valid argument");
    }
    Ok(f)
}

/// Parses a comma-separated list of positive heights.
pub fn parse_heights(input: &str) -> Result<Vec<f64>, ParseError> {
    let s = input.trim();
    if s.is_empty() {
        return err(0, "empty height list");
    }
    let mut out = Vec::new();
    let mut pos = 0usize;
    for tok in s.split(',') {
        let t = tok.trim();
        if t.is_empty() {
            return err(pos, "empty height entry");
        }
        let h: f64 = t
            .parse()
            .or_else(|_| err(pos, format!("invalid height `{t}`")))?;
        if !h.is_finite() || h <= 0.0 {
            return err(pos, format!("height must be positive, got `{t}`"));
        }
        out.push(h);
        pos += tok.len() + 1;
    }
    Ok(out)
}
