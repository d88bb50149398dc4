//! Deterministic printing. Each Laurent polynomial is rewritten in the real
//! basis `x^a`, `x^a cos(k.x)`, `x^a sin(k.x)` with the first nonzero entry of
//! `k` positive. Terms are ordered graded-lex on `a` (higher total degree
//! first, ties broken lex with the first coordinate most significant), then
//! constant before cos before sin, then by `k` lex.

use super::poly::{Cq, Poly, NV};
use super::ScalarExpr;
use num::{BigRational, Complex, Signed, Zero};
use std::collections::BTreeMap;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Trig {
    One,
    Cos([i16; NV]),
    Sin([i16; NV]),
}

fn normalized(k: [i16; NV]) -> ([i16; NV], bool) {
    match k.iter().find(|&&e| e != 0) {
        Some(&e) if e < 0 => (k.map(|v| -v), true),
        _ => (k, false),
    }
}

fn to_trig_basis(p: &Poly) -> Vec<([i16; NV], Trig, Cq)> {
    // group by x-monomial, then by normalized frequency: (c_k, c_-k)
    let mut groups: BTreeMap<[i16; NV], BTreeMap<[i16; NV], (Cq, Cq)>> = BTreeMap::new();
    for (m, c) in &p.terms {
        let mut a = [0i16; NV];
        let mut k = [0i16; NV];
        for j in 0..NV {
            a[j] = m.x(j);
            k[j] = m.k(j);
        }
        let (kn, flipped) = normalized(k);
        let e = groups.entry(a).or_default().entry(kn).or_insert_with(|| (Cq::zero(), Cq::zero()));
        if flipped {
            e.1 += c.clone();
        } else {
            e.0 += c.clone();
        }
    }
    let i = Complex::new(BigRational::zero(), num::One::one());
    let mut out = Vec::new();
    for (a, ks) in groups {
        for (k, (cp, cm)) in ks {
            if k.iter().all(|&e| e == 0) {
                out.push((a, Trig::One, cp));
            } else {
                let cc = &cp + &cm;
                let ss = &i * (&cp - &cm);
                if !cc.is_zero() {
                    out.push((a, Trig::Cos(k), cc));
                }
                if !ss.is_zero() {
                    out.push((a, Trig::Sin(k), ss));
                }
            }
        }
    }
    out.sort_by(|x, y| {
        let dx: i32 = x.0.iter().map(|&e| e as i32).sum();
        let dy: i32 = y.0.iter().map(|&e| e as i32).sum();
        dy.cmp(&dx).then(y.0.cmp(&x.0)).then(x.1.cmp(&y.1))
    });
    out
}

fn name(names: &[String], j: usize) -> String {
    names.get(j).cloned().unwrap_or_else(|| format!("x{}", j + 1))
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_freq(k: &[i16; NV], names: &[String]) -> String {
    let mut s = String::new();
    for j in 0..NV {
        let e = k[j];
        if e == 0 {
            continue;
        }
        let mag = e.abs();
        if s.is_empty() {
            if e < 0 {
                s.push('-');
            }
        } else {
            s.push_str(if e < 0 { " - " } else { " + " });
        }
        if mag != 1 {
            s.push_str(&format!("{}*", mag));
        }
        s.push_str(&name(names, j));
    }
    s
}

fn fmt_poly(p: &Poly, names: &[String]) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (idx, (a, trig, c)) in to_trig_basis(p).iter().enumerate() {
        let mut factors: Vec<String> = Vec::new();
        for j in 0..NV {
            match a[j] {
                0 => {}
                1 => factors.push(name(names, j)),
                e => factors.push(format!("{}^{}", name(names, j), e)),
            }
        }
        match trig {
            Trig::One => {}
            Trig::Cos(k) => factors.push(format!("cos({})", fmt_freq(k, names))),
            Trig::Sin(k) => factors.push(format!("sin({})", fmt_freq(k, names))),
        }
        // coefficient and sign
        let (neg, coef): (bool, String) = if c.im.is_zero() {
            let neg = c.re.is_negative();
            let mag = c.re.abs();
            if mag == num::One::one() && !factors.is_empty() {
                (neg, String::new())
            } else {
                (neg, fmt_rat(&mag))
            }
        } else if c.re.is_zero() {
            let neg = c.im.is_negative();
            let mag = c.im.abs();
            if mag == num::One::one() {
                (neg, "i".into())
            } else {
                (neg, format!("{}*i", fmt_rat(&mag)))
            }
        } else {
            let im = if c.im.is_negative() {
                format!(" - {}*i", fmt_rat(&c.im.abs()))
            } else {
                format!(" + {}*i", fmt_rat(&c.im))
            };
            (false, format!("({}{})", fmt_rat(&c.re), im))
        };
        if idx == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let mut parts = Vec::new();
        if !coef.is_empty() {
            parts.push(coef);
        }
        parts.extend(factors);
        s.push_str(&parts.join("*"));
    }
    s
}

impl ScalarExpr {
    /// Canonical text with the given coordinate names (defaults `x1..`).
    pub fn to_string_with(&self, names: &[String]) -> String {
        if self.denom().is_one() {
            return fmt_poly(self.numer(), names);
        }
        // center the denominator's frequencies for a balanced rendering
        let lo = self.denom().min_u();
        let hi = self.denom().max_u();
        let mut s = [0i16; NV];
        for j in 0..NV {
            s[j] = -((lo[j] + hi[j]).div_euclid(2));
        }
        let n = self.numer().shift_u(&s);
        let d = self.denom().shift_u(&s);
        let ns = fmt_poly(&n, names);
        let ds = fmt_poly(&d, names);
        let wrap_n = n.len() > 1 || ns.starts_with('-');
        format!(
            "{}/({})",
            if wrap_n { format!("({})", ns) } else { ns },
            ds
        )
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_expr;

    #[test]
    fn round_trip() {
        let names: Vec<String> = vec!["x".into(), "y".into()];
        for src in [
            "x^2 - 3/4*y + 2",
            "(1+2*i)*x*cos(x-2*y) - sin(y)",
            "1/(1+x^2+y^2)^2",
            "x/(2+cos(x))",
            "i*sin(2*x)/(3+sin(y))",
        ] {
            let e = parse_expr(src, &names).unwrap();
            let printed = e.to_string_with(&names);
            let back = parse_expr(&printed, &names).unwrap();
            assert_eq!(e, back, "{} -> {}", src, printed);
        }
    }

    #[test]
    fn graded_order() {
        let names: Vec<String> = vec!["x".into(), "y".into()];
        let e = parse_expr("1 + y + x + x*y + x^2", &names).unwrap();
        assert_eq!(e.to_string_with(&names), "x^2 + x*y + x + y + 1");
    }
}
