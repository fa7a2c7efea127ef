//! Fixed-point rendering with decimal half-up rounding.
//!
//! `format!("{:.4}")` rounds the exact binary value, so a mean stored as
//! 0.71424999999999994 prints as `0.7142` even though its shortest decimal
//! form is `0.71425`. Report cells round the shortest round-trip decimal
//! representation instead.

/// Renders `x` with `places` decimals, rounding half away from zero on the
/// shortest decimal representation of `x`.
pub fn fixed(x: f64, places: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    // `{:e}` yields the shortest round-trip digits, e.g. "7.1425e-1".
    let sci = format!("{:e}", x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("`{:e}` always has an exponent");
    let exp: i64 = exp.parse().expect("exponent is an integer");
    let digits: Vec<u8> = mantissa
        .bytes()
        .filter(u8::is_ascii_digit)
        .map(|b| b - b'0')
        .collect();

    // Value = 0.d1 d2 d3 ... * 10^(exp + 1). Build the integer part and
    // enough fractional digits to decide the rounding.
    let point = exp + 1;
    let digit_at = |i: i64| -> u8 {
        if i < 0 {
            0
        } else {
            digits.get(i as usize).copied().unwrap_or(0)
        }
    };
    let int_len = point.max(1);
    let mut out: Vec<u8> = Vec::with_capacity(int_len as usize + places);
    // integer digits
    for k in 0..int_len {
        let i = k + (point - int_len);
        out.push(if i < 0 { 0 } else { digit_at(i) });
    }
    for k in 0..places as i64 {
        out.push(digit_at(point + k));
    }
    if digit_at(point + places as i64) >= 5 {
        let mut i = out.len();
        loop {
            if i == 0 {
                out.insert(0, 1);
                break;
            }
            i -= 1;
            if out[i] == 9 {
                out[i] = 0;
            } else {
                out[i] += 1;
                break;
            }
        }
    }
    let split = out.len() - places;
    let int_part: String = out[..split].iter().map(|d| char::from(b'0' + d)).collect();
    let int_part = int_part.trim_start_matches('0');
    let int_part = if int_part.is_empty() { "0" } else { int_part };
    let mut s = String::new();
    let is_zero = out.iter().all(|&d| d == 0);
    if x.is_sign_negative() && !is_zero {
        s.push('-');
    }
    s.push_str(int_part);
    if places > 0 {
        s.push('.');
        s.extend(out[split..].iter().map(|d| char::from(b'0' + d)));
    }
    s
}

/// Renders a ratio as a percentage with `places` decimals, without the sign.
pub fn percent(ratio: f64, places: usize) -> String {
    // Scaling by 100 in binary can perturb the last digit, so shift the
    // decimal point on the shortest representation instead.
    let scaled: f64 = format!("{ratio:e}")
        .split_once('e')
        .and_then(|(m, e)| Some(format!("{m}e{}", e.parse::<i64>().ok()? + 2)))
        .and_then(|s| s.parse().ok())
        .unwrap_or(ratio * 100.0);
    fixed(scaled, places)
}
