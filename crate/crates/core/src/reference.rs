//! Published reference values, kept verbatim as printed (decimal strings and
//! exact fractions), plus helpers that turn them into comparable objects.

use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::exact::{parse_decimal, MPoly, Var};

/// `R̃₀ … R̃₃` of the quartic as `(E power, g power, coefficient)`.
pub const REFERENCE_TILDE_R: [&[(u32, u32, &str)]; 4] = [
    &[(1, 0, "-1")],
    &[(2, 0, "-1/2"), (0, 0, "1/2")],
    &[(3, 0, "-1/4"), (1, 0, "1"), (0, 1, "4")],
    &[(4, 0, "-1/8"), (2, 0, "5/4"), (0, 0, "-9/8"), (1, 1, "12")],
];

/// `R̃′₂ … R̃′₇` (the g-dependent parts), indexed from `2j = 2`.
pub const REFERENCE_PRIME_R: [&[(u32, u32, &str)]; 6] = [
    &[(0, 1, "4")],
    &[(1, 1, "12")],
    &[(2, 1, "21"), (0, 1, "-48")],
    &[(3, 1, "28"), (1, 1, "-220"), (0, 2, "-800")],
    &[(4, 1, "63/2"), (2, 1, "-558"), (0, 1, "864"), (1, 2, "-4500")],
    &[(5, 1, "63/2"), (3, 1, "-1035"), (1, 1, "10647/2"), (2, 2, "-13752"), (0, 2, "49392")],
];

/// `det C⁽⁰⁾ … det C⁽⁴⁾` for generic `w_k`: `(coefficient, E power, [w₁..w₄] powers)`.
pub const REFERENCE_DET_C: [&[(&str, u32, [u32; 4])]; 5] = [
    &[("-1", 1, [0, 0, 0, 0])],
    &[("1", 2, [0, 0, 0, 0]), ("-1", 0, [1, 0, 0, 0])],
    &[("-1", 3, [0, 0, 0, 0]), ("4", 0, [0, 1, 0, 0]), ("4", 1, [1, 0, 0, 0])],
    &[
        ("1", 4, [0, 0, 0, 0]),
        ("-10", 2, [1, 0, 0, 0]),
        ("9", 0, [2, 0, 0, 0]),
        ("-24", 1, [0, 1, 0, 0]),
        ("-36", 0, [0, 0, 1, 0]),
    ],
    &[
        ("-1", 5, [0, 0, 0, 0]),
        ("20", 3, [1, 0, 0, 0]),
        ("-64", 1, [2, 0, 0, 0]),
        ("84", 2, [0, 1, 0, 0]),
        ("-192", 0, [1, 1, 0, 0]),
        ("288", 1, [0, 0, 1, 0]),
        ("576", 0, [0, 0, 0, 1]),
    ],
];

/// Printed ground-state series at `D = −4`, `E⁽⁰⁾ … E⁽⁷⁾`.
pub const REFERENCE_E_MINUS4: [&str; 8] = ["-2", "2", "3", "8", "105/4", "96", "3003/16", "1536"];

/// Offsets `ν + 4` of the root approaching −4: `(k, real part, imaginary part)`.
/// For `k ≤ 9` the printed numbers are the roots `ν` themselves (a complex
/// pair when an imaginary part is given).
pub const REFERENCE_OFFSETS_M2: &[(usize, &str, &str)] = &[
    (5, "-3.22834", "0.426293"),
    (6, "-3.44545", ""),
    (7, "-3.63083", "0.34226"),
    (8, "-3.76443", ""),
    (9, "-3.9583", "0.226557"),
    (10, "+0.04231592827", ""),
    (11, "-0.01231265412", ""),
    (12, "+0.00178433080", ""),
    (13, "-0.00027422590", ""),
    (14, "+0.00003787462", ""),
    (15, "-4.86252995e-6", ""),
    (16, "+5.80950053e-7", ""),
    (17, "-6.49387664e-8", ""),
    (18, "+6.81906230e-9", ""),
    (19, "-6.75145346e-10", ""),
    (20, "+6.32321355e-11", ""),
    (21, "-5.61842521e-12", ""),
    (22, "+4.74864227e-13", ""),
    (23, "-3.82680164e-14", ""),
    (24, "+2.94682238e-15", ""),
    (25, "-2.17261017e-16", ""),
    (26, "+1.53640755e-17", ""),
    (27, "-1.04388321e-18", ""),
    (28, "+6.82474923e-20", ""),
    (29, "-4.29961693e-21", ""),
    (30, "+2.61370107e-22", ""),
    (31, "-1.53497157e-23", ""),
    (32, "+8.71891707e-25", ""),
    (33, "-4.79523448e-26", ""),
    (34, "+2.55611474e-27", ""),
    (35, "-1.32186040e-28", ""),
    (36, "+6.63762841e-30", ""),
    (37, "-3.23912410e-31", ""),
    (38, "+1.53735607e-32", ""),
    (39, "-7.10198670e-34", ""),
    (40, "+3.19560318e-35", ""),
    (41, "-1.40147930e-36", ""),
    (42, "+5.99459657e-38", ""),
    (43, "-2.50229008e-39", ""),
    (44, "+1.01993415e-40", ""),
    (45, "-4.06166432e-42", ""),
    (46, "+1.58111340e-43", ""),
    (47, "-6.01961315e-45", ""),
    (48, "+2.24249068e-46", ""),
    (49, "-8.17805838e-48", ""),
    (50, "+2.92092144e-49", ""),
    (51, "-1.02217301e-50", ""),
    (52, "+3.50623616e-52", ""),
    (53, "-1.17934411e-53", ""),
    (54, "+3.89122545e-55", ""),
    (55, "-1.25990087e-56", ""),
    (56, "+4.00444478e-58", ""),
    (57, "-1.24982870e-59", ""),
    (58, "+3.83179265e-61", ""),
    (59, "-1.15433788e-62", ""),
    (60, "+3.41802128e-64", ""),
];

/// Offsets `ν + 6` of the root approaching −6.
pub const REFERENCE_OFFSETS_M3: &[(usize, &str)] = &[
    (21, "+0.03432898"),
    (22, "-0.011016"),
    (23, "+0.0020276"),
    (24, "-0.00040899"),
    (25, "+0.000076759"),
    (26, "-0.000013876"),
    (27, "+2.40442e-6"),
    (28, "-4.00519e-7"),
    (29, "+6.42173e-8"),
    (30, "-9.92472e-9"),
    (31, "+1.48040e-9"),
    (32, "-2.13385e-10"),
    (33, "+2.97550e-11"),
    (34, "-4.01814e-12"),
    (35, "+5.26006e-13"),
    (36, "-6.68131e-14"),
    (37, "+8.24173e-15"),
    (38, "-9.88147e-16"),
    (39, "+1.15242e-16"),
    (40, "-1.30830e-17"),
    (41, "+1.44684e-18"),
    (42, "-1.55969e-19"),
    (43, "+1.63996e-20"),
    (44, "-1.68294e-21"),
    (45, "+1.68654e-22"),
    (46, "-1.65141e-23"),
    (47, "+1.58077e-24"),
    (48, "-1.47999e-25"),
    (49, "+1.35591e-26"),
    (50, "-1.21614e-27"),
    (51, "+1.06834e-28"),
    (52, "-9.19592e-30"),
    (53, "+7.75910e-31"),
    (54, "-6.41992e-32"),
    (55, "+5.21090e-33"),
    (56, "-4.15065e-34"),
    (57, "+3.24558e-35"),
    (58, "-2.49222e-36"),
    (59, "+1.87991e-37"),
    (60, "-1.39342e-38"),
];

/// A printed decimal: its exact value and the number of significant digits.
#[derive(Clone, Debug, PartialEq)]
pub struct Printed {
    pub value: Rational,
    pub digits: u32,
    /// Half a unit in the last printed place.
    pub half_ulp: Rational,
}

pub fn printed(s: &str) -> Result<Printed> {
    let t = s.trim().trim_start_matches(['+', '-']);
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|e| Error::Parse(format!("`{s}`: {e}")))?),
        None => (t, 0),
    };
    let frac_len = mant.split_once('.').map_or(0, |(_, f)| f.len()) as i32;
    let digits = mant.chars().filter(char::is_ascii_digit).skip_while(|&c| c == '0').count() as u32;
    let place = exp - frac_len;
    let unit = if place >= 0 {
        Rational::from(rug::Integer::from(10u32).pow(place as u32))
    } else {
        Rational::from((1, rug::Integer::from(10u32).pow((-place) as u32)))
    };
    Ok(Printed { value: parse_decimal(s.trim().trim_start_matches('+'))?, digits, half_ulp: unit / 2u32 })
}

/// `(E power, g power, coefficient)` triples as a polynomial in `(E, g)`.
pub fn eg_poly(terms: &[(u32, u32, &str)]) -> Result<MPoly> {
    let parsed = terms
        .iter()
        .map(|&(e, g, c)| Ok((vec![e, g], parse_decimal(c)?)))
        .collect::<Result<Vec<_>>>()?;
    MPoly::from_terms(&[Var::E, Var::G], parsed)
}

/// A `REFERENCE_DET_C` entry over `(E, w₁, …, w₄)`.
pub fn det_c_poly(terms: &[(&str, u32, [u32; 4])]) -> Result<MPoly> {
    let vars = [Var::E, Var::W(1), Var::W(2), Var::W(3), Var::W(4)];
    let parsed = terms
        .iter()
        .map(|&(c, e, w)| Ok((vec![e, w[0], w[1], w[2], w[3]], parse_decimal(c)?)))
        .collect::<Result<Vec<_>>>()?;
    MPoly::from_terms(&vars, parsed)
}

/// Closed-form singularity data `(E₀, g₀, c)` for `M = 2, 3` of the quartic.
pub fn closed_form_singularity(m: u32, prec: u32) -> Option<(Float, Float, Float)> {
    let f = |x: f64| Float::with_val(prec, x);
    match m {
        2 => {
            let s3 = f(3.0).sqrt();
            let e0 = -Float::with_val(prec, 2u32 / &s3);
            let g0 = Float::with_val(prec, Float::with_val(prec, &s3 * 3u32).recip_ref());
            let c = Float::with_val(prec, 8) / 9u32;
            Some((e0, g0, c))
        }
        3 => {
            let s13 = f(13.0).sqrt();
            let inner = Float::with_val(prec, Float::with_val(prec, &s13 * 2u32) + 5u32);
            let e0 = -Float::with_val(prec, Float::with_val(prec, &inner / 3u32).sqrt_ref());
            let num = Float::with_val(prec, Float::with_val(prec, &s13 * 5u32) - 1u32);
            let den = Float::with_val(prec, Float::with_val(prec, &inner * 3u32).sqrt_ref()) * 36u32;
            let g0 = num / den;
            let c = (f(5.0) - s13.recip()) * 2u32 / 9u32;
            Some((e0, g0, c))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_digits_and_ulp() {
        let p = printed("+0.00003787462").unwrap();
        assert_eq!(p.digits, 7);
        assert_eq!(p.half_ulp, Rational::from((1, 200_000_000_000u64)));
        let p = printed("-4.86252995e-6").unwrap();
        assert_eq!(p.digits, 9);
        assert_eq!(p.value, Rational::from((-486252995, 100_000_000_000_000u64)));
        let p = printed("-3.9583").unwrap();
        assert_eq!(p.digits, 5);
    }

    #[test]
    fn tables_are_complete() {
        let ks: Vec<usize> = REFERENCE_OFFSETS_M2.iter().map(|r| r.0).collect();
        assert_eq!(ks, (5..=60).collect::<Vec<_>>());
        let ks: Vec<usize> = REFERENCE_OFFSETS_M3.iter().map(|r| r.0).collect();
        assert_eq!(ks, (21..=60).collect::<Vec<_>>());
        // alternating signs from k = 10 on
        for w in REFERENCE_OFFSETS_M2[5..].windows(2) {
            assert_ne!(w[0].1.starts_with('-'), w[1].1.starts_with('-'));
        }
    }

    #[test]
    fn closed_forms_are_degenerate_roots() {
        // E³ − 4E − 16g and its E-derivative vanish at (E₀, g₀)
        let (e, g, _) = closed_form_singularity(2, 256).unwrap();
        let r = Float::with_val(256, Float::with_val(256, (&e).pow(3u32)) - Float::with_val(256, &e * 4u32) - Float::with_val(256, &g * 16u32));
        assert!(r.abs() < 1e-70);
        let (e, g, c) = closed_form_singularity(3, 256).unwrap();
        assert!((e.to_f64() + 2.017523).abs() < 1e-5 && (g.to_f64() - 0.0781478).abs() < 1e-6);
        assert!((c.to_f64() - 2.0 / 9.0 * (5.0 - 1.0 / 13f64.sqrt())).abs() < 1e-15);
    }
}
