//! Number formatting for the TSV outputs.

/// Formats like C's `%.17g`: 17 significant digits, trailing zeros trimmed,
/// positional notation for exponents in `[-5, 17)`.
pub fn g17(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };

    let body = if (-5..17).contains(&exp) {
        if exp < 0 {
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
        } else {
            let point = exp as usize + 1;
            if digits.len() <= point {
                format!("{}{}", digits, "0".repeat(point - digits.len()))
            } else {
                format!("{}.{}", &digits[..point], &digits[point..])
            }
        }
    } else {
        let (head, tail) = digits.split_at(1);
        if tail.is_empty() {
            format!("{head}e{exp}")
        } else {
            format!("{head}.{tail}e{exp}")
        }
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Shortest decimal that round-trips to the same `f64`.
pub fn shortest(x: f64) -> String {
    format!("{x}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_matches_printf() {
        assert_eq!(g17(1.0), "1");
        assert_eq!(g17(0.5), "0.5");
        assert_eq!(g17(1.0 / 3.0), "0.33333333333333331");
        assert_eq!(g17(2.0 / 3.0), "0.66666666666666663");
        assert_eq!(g17(0.1), "0.10000000000000001");
        assert_eq!(g17(1e-7), "9.9999999999999995e-8");
        assert_eq!(g17(123456.0), "123456");
        assert_eq!(g17(-0.25), "-0.25");
        assert_eq!(g17(0.0), "0");
        assert_eq!(g17(1e20), "1e20");
    }

    #[test]
    fn g17_round_trips() {
        for x in [1.0 / 3.0, 0.07, 1e-300, 123.456e10, 5e-324, f64::MAX] {
            assert_eq!(g17(x).parse::<f64>().unwrap(), x);
        }
    }
}
