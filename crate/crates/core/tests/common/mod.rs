//! Test helpers shared by the integration suites.
#![allow(dead_code)]

use std::collections::BTreeMap;

use equivol::adhm::{Group, SoMomentExponent};
use equivol::algebra::{FactoredRational, LinearForm, SymbolTable};
use equivol::scalar::{int, rat};
use equivol::Rational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random rational with numerator in [-30, 30] and denominator in [1, 7].
pub fn random_rational(r: &mut ChaCha8Rng) -> Rational {
    rat(r.gen_range(-30..=30), r.gen_range(1..=7))
}

pub fn random_point(table: &SymbolTable, r: &mut ChaCha8Rng) -> Vec<Rational> {
    (0..table.len()).map(|_| random_rational(r)).collect()
}

pub fn named(table: &SymbolTable, point: &[Rational]) -> BTreeMap<String, Rational> {
    (0..table.len()).map(|i| (table.name(i).to_string(), point[i].clone())).collect()
}

/// `scale / prod(forms)` with forms given by symbol names.
pub fn reciprocal(table: &SymbolTable, scale: Rational, forms: &[&[(&str, i64)]]) -> FactoredRational<Rational> {
    let den = forms.iter().map(|f| (LinearForm::parse_terms(table, f).unwrap(), 1)).collect();
    FactoredRational::from_linear(table, scale, vec![], den).unwrap()
}

fn pow(x: &Rational, k: usize) -> Rational {
    let mut r = Rational::one();
    for _ in 0..k {
        r *= x;
    }
    r
}

fn fact(n: usize) -> Rational {
    (1..=n as i64).fold(int(1), |a, k| a * int(k))
}

/// The printed ADHM central functions, `prefactor * varpi^2 e(mu_C) / e_T`,
/// evaluated directly from the displayed product formulas at a point given
/// by `sigma`, `eps = (eps1, eps2)` and `tau`. Returns `(prefactor, value)`;
/// `value` excludes the prefactor and is `None` at a pole.
pub fn printed_central(
    group: Group,
    n: usize,
    c: usize,
    so_exponent: SoMomentExponent,
    sigma: &[Rational],
    eps: [Rational; 2],
    tau: &[Rational],
) -> (Rational, Option<Rational>) {
    let e12 = &eps[0] + &eps[1];
    let h = &e12 / int(2);
    let sq = |x: &Rational| x * x;
    let (pre, num, den) = match group {
        Group::SU => {
            let mut w = int(1);
            for e in 0..c {
                for f in 0..c {
                    if e != f {
                        w *= &sigma[e] - &sigma[f];
                    }
                }
            }
            let mut mu = int(1);
            for g in 0..c {
                for hh in 0..c {
                    mu *= &e12 + &sigma[g] - &sigma[hh];
                }
            }
            let mut d = int(1);
            for k in 0..2 {
                for i in 0..c {
                    for j in 0..c {
                        d *= &eps[k] + &sigma[i] - &sigma[j];
                    }
                }
            }
            for m in 0..c {
                for o in 0..n {
                    d *= &sigma[m] - &tau[o];
                    d *= &e12 - &sigma[m] + &tau[o];
                }
            }
            (int(1) / fact(c), w * mu, d)
        }
        Group::Sp => {
            let m = c / 2;
            let odd = c % 2 == 1;
            let weyl = if odd { pow(&int(2), m) * fact(m) } else { pow(&int(2), m - 1) * fact(m) };
            let mut w = int(1);
            for i in 0..m {
                for j in i + 1..m {
                    w *= sq(&(sq(&sigma[i]) - sq(&sigma[j])));
                }
                if odd {
                    w *= sq(&sigma[i]);
                }
            }
            let mut mu = pow(&e12, m);
            if odd {
                for i in 0..m {
                    mu *= sq(&e12) - sq(&sigma[i]);
                }
            }
            for i in 0..m {
                for j in i + 1..m {
                    mu *= sq(&e12) - sq(&(&sigma[i] + &sigma[j]));
                    mu *= sq(&e12) - sq(&(&sigma[i] - &sigma[j]));
                }
            }
            let mut d = int(1);
            for k in 0..2 {
                if odd {
                    d *= &eps[k];
                    for i in 0..m {
                        d *= sq(&eps[k]) - sq(&sigma[i]);
                    }
                }
                for i in 0..m {
                    for j in 0..m {
                        d *= &eps[k] + &sigma[i] - &sigma[j];
                    }
                    for j in i..m {
                        d *= sq(&eps[k]) - sq(&(&sigma[i] + &sigma[j]));
                    }
                }
            }
            for i in 0..m {
                for l in 0..n {
                    d *= sq(&(&h + &tau[l])) - sq(&sigma[i]);
                    d *= sq(&(&h - &tau[l])) - sq(&sigma[i]);
                }
            }
            if odd {
                for l in 0..n {
                    d *= sq(&h) - sq(&tau[l]);
                }
            }
            (int(1) / (int(2) * weyl), w * mu, d)
        }
        Group::SO => {
            let rank = n / 2;
            let mut w = int(1);
            for i in 0..c {
                for j in i + 1..c {
                    w *= sq(&(sq(&sigma[i]) - sq(&sigma[j])));
                }
                w *= sq(&(int(2) * &sigma[i]));
            }
            let x = match so_exponent {
                SoMomentExponent::Charge => c,
                SoMomentExponent::Printed => n / 2,
            };
            let mut mu = pow(&e12, x);
            for i in 0..c {
                for j in i..c {
                    if j > i {
                        mu *= sq(&e12) - sq(&(&sigma[i] - &sigma[j]));
                    }
                    mu *= sq(&e12) - sq(&(&sigma[i] + &sigma[j]));
                }
            }
            let mut d = int(1);
            for k in 0..2 {
                for i in 0..c {
                    for j in 0..c {
                        d *= &eps[k] + &sigma[i] - &sigma[j];
                    }
                    for j in i + 1..c {
                        d *= sq(&eps[k]) - sq(&(&sigma[i] + &sigma[j]));
                    }
                }
            }
            if n % 2 == 1 {
                for i in 0..c {
                    d *= sq(&h) - sq(&sigma[i]);
                }
            }
            for i in 0..c {
                for l in 0..rank {
                    d *= sq(&(&h + &tau[l])) - sq(&sigma[i]);
                    d *= sq(&(&h - &tau[l])) - sq(&sigma[i]);
                }
            }
            (int(1) / (fact(c) * pow(&int(2), c)), w * mu, d)
        }
    };
    let value = if den.is_zero() { None } else { Some(num / den) };
    (pre, value)
}
