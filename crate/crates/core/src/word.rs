//! Words over the letters `f`, `g`, `e`, stored as integer-exponent
//! syllables. Evaluation and rendering both read the same syllable list.

use std::fmt;

use crate::moebius::Moebius;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    F,
    G,
    E,
}

impl Letter {
    pub fn symbol(self) -> char {
        match self {
            Letter::F => 'f',
            Letter::G => 'g',
            Letter::E => 'e',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Syllable {
    pub letter: Letter,
    pub exp: i32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    syllables: Vec<Syllable>,
}

/// Matrices substituted for the letters.
#[derive(Debug, Clone, Copy)]
pub struct Substitution {
    pub f: Moebius,
    pub g: Moebius,
    pub e: Option<Moebius>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn letter(letter: Letter) -> Self {
        Word::power_of(letter, 1)
    }

    pub fn power_of(letter: Letter, exp: i32) -> Self {
        let mut w = Word::empty();
        w.push(letter, exp);
        w
    }

    /// Appends `letter^exp`, merging with the last syllable and dropping
    /// zero exponents.
    pub fn push(&mut self, letter: Letter, exp: i32) {
        if exp == 0 {
            return;
        }
        if let Some(last) = self.syllables.last_mut() {
            if last.letter == letter {
                last.exp += exp;
                if last.exp == 0 {
                    self.syllables.pop();
                }
                return;
            }
        }
        self.syllables.push(Syllable { letter, exp });
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Number of letters, `Σ|exp|`.
    pub fn length(&self) -> usize {
        self.syllables.iter().map(|s| s.exp.unsigned_abs() as usize).sum()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for s in &other.syllables {
            w.push(s.letter, s.exp);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        let mut w = Word::empty();
        for s in self.syllables.iter().rev() {
            w.push(s.letter, -s.exp);
        }
        w
    }

    /// `self^k`; negative `k` inverts. Freely reduces across the seams.
    pub fn pow(&self, k: i32) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        (0..k.unsigned_abs()).fold(Word::empty(), |acc, _| acc.concat(&base))
    }

    /// `a b a⁻¹ b⁻¹`.
    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.concat(b).concat(&a.inverse()).concat(&b.inverse())
    }

    /// Evaluates the word left to right. Returns `None` when it contains `e`
    /// and no matrix for `e` is supplied.
    pub fn eval(&self, sub: &Substitution) -> Option<Moebius> {
        let mut acc = Moebius::identity();
        for s in &self.syllables {
            let m = match s.letter {
                Letter::F => sub.f,
                Letter::G => sub.g,
                Letter::E => sub.e?,
            };
            acc = acc.compose(&m.pow(i64::from(s.exp)));
        }
        Some(acc)
    }

    /// A bare letter such as `f`; powers of it render without parentheses.
    pub fn is_single_letter(&self) -> bool {
        self.syllables.len() == 1 && self.syllables[0].exp == 1
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("1");
        }
        for (i, s) in self.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if s.exp == 1 {
                write!(f, "{}", s.letter.symbol())?;
            } else {
                write!(f, "{}^{}", s.letter.symbol(), s.exp)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::Complex;

    #[test]
    fn free_reduction_on_push() {
        let f = Word::letter(Letter::F);
        let g = Word::letter(Letter::G);
        let fg = f.concat(&g);
        assert!(fg.concat(&fg.inverse()).is_empty());
        assert_eq!(f.pow(3).syllables(), &[Syllable { letter: Letter::F, exp: 3 }]);
        assert_eq!(Word::commutator(&f, &g).to_string(), "f g f^-1 g^-1");
        assert_eq!(Word::commutator(&f, &g).length(), 4);
        assert_eq!(Word::empty().to_string(), "1");
    }

    #[test]
    fn evaluation_matches_direct_products() {
        let f = Moebius::new(Complex::new(0.5, 0.0), Complex::new(0.0, 0.75), Complex::new(0.0, 1.0), Complex::new(0.5, 0.0)).unwrap();
        let g = Moebius::translation(Complex::new(1.0, 0.0));
        let sub = Substitution { f, g, e: None };
        let w = Word::commutator(&Word::letter(Letter::F), &Word::letter(Letter::G));
        let direct = f * g * f.inverse() * g.inverse();
        assert!(w.eval(&sub).unwrap().approx_eq(&direct, 1e-14));
        assert!(Word::letter(Letter::E).eval(&sub).is_none());
    }
}
