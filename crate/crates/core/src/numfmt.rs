/// Plain decimal rendering of `x` rounded to `digits` significant digits, with trailing
/// zeros trimmed (one fractional digit is always kept). Never uses exponent notation,
/// always uses `.` as decimal separator.
pub fn format_significant(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0.0".to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent notation");
    let exp: i64 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let mantissa_digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let len = mantissa_digits.len() as i64;
    let point = exp + 1;

    let (int_part, frac_part) = if point <= 0 {
        (
            "0".to_string(),
            format!("{}{}", "0".repeat((-point) as usize), mantissa_digits),
        )
    } else if point >= len {
        (
            format!("{}{}", mantissa_digits, "0".repeat((point - len) as usize)),
            String::new(),
        )
    } else {
        let (a, b) = mantissa_digits.split_at(point as usize);
        (a.to_string(), b.to_string())
    };
    let frac = frac_part.trim_end_matches('0');
    let frac = if frac.is_empty() { "0" } else { frac };
    format!("{}{}.{}", if negative { "-" } else { "" }, int_part, frac)
}
