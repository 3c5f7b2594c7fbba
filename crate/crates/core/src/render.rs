//! LaTeX rendering.

use num_traits::{One, Signed};

use crate::algebra::{LinearForm, Polynomial, SymbolTable};
use crate::{Rational, RationalFunction};

/// `eps1 -> \varepsilon_{1}`, `tau2 -> \tau_{2}`, `sigma1 -> \sigma_{1}`.
pub fn latex_symbol(name: &str) -> String {
    let split = name.find(|c: char| c.is_ascii_digit()).unwrap_or(name.len());
    let (base, idx) = name.split_at(split);
    let base = match base {
        "eps" | "epsilon" => "\\varepsilon".to_string(),
        "tau" | "sigma" | "alpha" | "beta" | "mu" | "xi" | "lambda" => format!("\\{base}"),
        _ => base.to_string(),
    };
    if idx.is_empty() {
        base
    } else {
        format!("{base}_{{{idx}}}")
    }
}

fn rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        let s = if r.is_negative() { "-" } else { "" };
        format!("{s}\\frac{{{}}}{{{}}}", r.numer().abs(), r.denom())
    }
}

fn join_terms(terms: Vec<(Rational, String)>) -> String {
    let mut out = String::new();
    for (k, (c, m)) in terms.into_iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if m.is_empty() {
            out.push_str(&rational(&a));
        } else if a.is_one() {
            out.push_str(&m);
        } else {
            out.push_str(&rational(&a));
            out.push(' ');
            out.push_str(&m);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn latex_form(f: &LinearForm<Rational>) -> String {
    join_terms(f.support().map(|(i, c)| (c.clone(), latex_symbol(f.table().name(i)))).collect())
}

fn monomial(t: &SymbolTable, e: &[u16]) -> String {
    let mut parts = Vec::new();
    for (i, &k) in e.iter().enumerate() {
        match k {
            0 => {}
            1 => parts.push(latex_symbol(t.name(i))),
            _ => parts.push(format!("{}^{{{k}}}", latex_symbol(t.name(i)))),
        }
    }
    parts.join(" ")
}

pub fn latex_poly(p: &Polynomial<Rational>) -> String {
    join_terms(p.terms().iter().map(|(m, c)| (c.clone(), monomial(p.table(), m.exponents()))).collect())
}

/// `\frac{numerator}{denominator}` of the canonical form.
pub fn latex_function(f: &RationalFunction) -> String {
    let f = f.canonical();
    if f.is_zero() {
        return "0".into();
    }
    let s = f.scalar();
    let num_poly = f.numerator();
    let sign = if s.is_negative() { "-" } else { "" };
    let p = Rational::from_integer(s.numer().abs());
    let num = if num_poly.constant_value().is_some() {
        rational(&(p * num_poly.constant_value().unwrap()))
    } else {
        let body = latex_poly(&num_poly);
        let multi = num_poly.terms().len() > 1;
        match (p.is_one(), multi) {
            (true, _) => body,
            (false, true) => format!("{} \\left({body}\\right)", rational(&p)),
            (false, false) => format!("{} {body}", rational(&p)),
        }
    };
    let mut den: Vec<String> = Vec::new();
    if !s.denom().is_one() {
        den.push(s.denom().to_string());
    }
    for d in f.denominator() {
        let single = d.form.support().count() == 1 && d.form.support().all(|(_, c)| c.is_one());
        let body = if single { latex_form(&d.form) } else { format!("\\left({}\\right)", latex_form(&d.form)) };
        den.push(if d.mult > 1 { format!("{body}^{{{}}}", d.mult) } else { body });
    }
    if den.is_empty() {
        format!("{sign}{num}")
    } else {
        format!("{sign}\\frac{{{num}}}{{{}}}", den.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{FactoredRational, Role};
    use crate::scalar::rat;

    #[test]
    fn renders_fraction() {
        let t = SymbolTable::from_pairs(&[("tau1", Role::Framing), ("tau2", Role::Framing)]).unwrap();
        let a = LinearForm::parse_terms(&t, &[("tau1", 1)]).unwrap();
        let b = LinearForm::parse_terms(&t, &[("tau2", 1)]).unwrap();
        let f = FactoredRational::from_linear(&t, rat(1, 2), vec![], vec![(a, 1), (b, 1)]).unwrap();
        assert_eq!(latex_function(&f), "\\frac{1}{2 \\tau_{1} \\tau_{2}}");
        assert_eq!(latex_symbol("eps2"), "\\varepsilon_{2}");
    }
}
