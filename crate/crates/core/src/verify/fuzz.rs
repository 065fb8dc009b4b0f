//! Seeded random expression text for parser checks.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FUNCS: [&str; 7] = ["sin", "cos", "tan", "exp", "log", "sqrt", "abs"];
const VARS: [&str; 3] = ["x", "t", "y"];
const OPS: [&str; 5] = ["+", "-", "*", "/", "^"];

pub struct ExprFuzzer {
    rng: ChaCha8Rng,
    max_depth: usize,
}

impl ExprFuzzer {
    pub fn new(seed: u64, max_depth: usize) -> Self {
        ExprFuzzer {
            rng: ChaCha8Rng::seed_from_u64(seed),
            max_depth,
        }
    }

    /// A syntactically valid expression with random spacing and redundant
    /// parentheses.
    pub fn expression(&mut self) -> String {
        let depth = self.max_depth;
        self.node(depth)
    }

    /// A valid expression with one random byte deleted, duplicated or
    /// replaced, usually producing a syntax error.
    pub fn corrupted(&mut self) -> String {
        let mut text = self.expression().into_bytes();
        let at = self.rng.random_range(0..text.len());
        match self.rng.random_range(0..3) {
            0 => {
                text.remove(at);
            }
            1 => text.insert(at, text[at]),
            _ => text[at] = b"()+-*/^.e,#x9"[self.rng.random_range(0..13)],
        }
        String::from_utf8(text).expect("ASCII input stays valid UTF-8")
    }

    pub fn point(&mut self) -> (f64, f64, f64) {
        (
            self.rng.random_range(-2.0..2.0),
            self.rng.random_range(-2.0..2.0),
            self.rng.random_range(-2.0..2.0),
        )
    }

    fn space(&mut self) -> &'static str {
        if self.rng.random_bool(0.3) {
            " "
        } else {
            ""
        }
    }

    fn literal(&mut self) -> String {
        match self.rng.random_range(0..4) {
            0 => self.rng.random_range(0..100u32).to_string(),
            1 => format!(
                "{}.{}",
                self.rng.random_range(0..10u32),
                self.rng.random_range(0..1000u32)
            ),
            2 => format!(
                "{}.{}e{}",
                self.rng.random_range(1..10u32),
                self.rng.random_range(0..100u32),
                self.rng.random_range(-3..4i32)
            ),
            _ => format!(".{}", self.rng.random_range(1..100u32)),
        }
    }

    fn node(&mut self, depth: usize) -> String {
        if depth == 0 || self.rng.random_bool(0.25) {
            return if self.rng.random_bool(0.5) {
                self.literal()
            } else {
                VARS[self.rng.random_range(0..VARS.len())].to_string()
            };
        }
        let (a, b) = (self.space(), self.space());
        match self.rng.random_range(0..10) {
            0..=4 => {
                let op = OPS[self.rng.random_range(0..OPS.len())];
                let lhs = self.operand(depth - 1);
                let rhs = self.operand(depth - 1);
                format!("{lhs}{a}{op}{b}{rhs}")
            }
            5 | 6 => {
                let f = FUNCS[self.rng.random_range(0..FUNCS.len())];
                let arg = self.node(depth - 1);
                format!("{f}({a}{arg}{b})")
            }
            7 => format!("-{a}{}", self.operand(depth - 1)),
            _ => format!("({a}{}{b})", self.node(depth - 1)),
        }
    }

    /// Operands are parenthesized half the time so that precedence and
    /// grouping both get exercised.
    fn operand(&mut self, depth: usize) -> String {
        let inner = self.node(depth);
        if self.rng.random_bool(0.5) {
            format!("({inner})")
        } else {
            inner
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_for_a_seed() {
        let a: Vec<String> = {
            let mut f = ExprFuzzer::new(7, 5);
            (0..20).map(|_| f.expression()).collect()
        };
        let mut f = ExprFuzzer::new(7, 5);
        let b: Vec<String> = (0..20).map(|_| f.expression()).collect();
        assert_eq!(a, b);
        assert!(a.iter().any(|s| s.len() > 10));
    }
}
