//! Reference computations used only by the verification checks.
//!
//! Nothing here calls into `expr`, `problem` or `solver`: the examples are
//! hand-coded closures, the step formulas are written out directly and the
//! expression evaluator works on raw text.

/// A built-in example as plain functions.
#[derive(Clone, Copy)]
pub struct ScriptedExample {
    pub name: &'static str,
    pub f: fn(f64, f64) -> f64,
    pub k: fn(f64, f64, f64) -> f64,
    pub y0: f64,
    pub exact: fn(f64) -> f64,
}

pub const EXAMPLES: [ScriptedExample; 4] = [
    ScriptedExample {
        name: "ex1",
        f: |x, y| 1.0 + 2.0 * x - y,
        k: |x, t, y| x * (1.0 + 2.0 * x) * (t * (x - t)).exp() * y,
        y0: 1.0,
        exact: |x| (x * x).exp(),
    },
    ScriptedExample {
        name: "ex2",
        f: |x, _| 2.0 * x - (x * x * x * x).sin() / 2.0,
        k: |x, t, y| x * x * t * (x * x * y).cos(),
        y0: 0.0,
        exact: |x| x * x,
    },
    ScriptedExample {
        name: "ex3",
        f: |x, _| 1.0 - x / 2.0 + x * (-(x * x)).exp() / 2.0,
        k: |x, t, y| x * t * (-(y * y)).exp(),
        y0: 0.0,
        exact: |x| x,
    },
    ScriptedExample {
        name: "ex4",
        f: |_, _| 1.0,
        k: |_, t, y| (-t).exp() * y * y,
        y0: 1.0,
        exact: |x| x.exp(),
    },
];

pub fn example(name: &str) -> Option<ScriptedExample> {
    EXAMPLES.iter().copied().find(|e| e.name == name)
}

/// The step formulas with an adjustable weight on the three corner kernel
/// terms of `M1` (`h²/4` in the method).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScriptedScheme {
    pub corner_weight: f64,
}

impl ScriptedScheme {
    pub const FAITHFUL: ScriptedScheme = ScriptedScheme {
        corner_weight: 0.25,
    };

    /// Returns `(M1, M2, y_{j+1})`, starting at `x0 = 0`.
    pub fn step(&self, ex: &ScriptedExample, ys: &[f64], j: usize, h: f64) -> (f64, f64, f64) {
        let x = |i: usize| i as f64 * h;
        let (f, k) = (ex.f, ex.k);
        let (xj, xn, y0, yj) = (x(j), x(j + 1), ys[0], ys[j]);

        let mut lag = 0.0;
        for (i, &yi) in ys.iter().enumerate().take(j).skip(1) {
            lag += k(xj, x(i), yi);
        }
        for (i, &yi) in ys.iter().enumerate().take(j + 1).skip(1) {
            lag += k(xn, x(i), yi);
        }
        let m1 = yj
            + h / 2.0 * f(xj, yj)
            + self.corner_weight * h * h * (k(xj, 0.0, y0) + k(xj, xj, yj) + k(xn, 0.0, y0))
            + h * h / 2.0 * lag;

        let n = |z: f64| h / 2.0 * f(xn, z) + h * h / 4.0 * k(xn, xn, z);
        let m2 = m1 + n(m1);
        (m1, m2, m1 + n(m2))
    }

    pub fn solve(&self, ex: &ScriptedExample, h: f64, steps: usize) -> Vec<f64> {
        let mut ys = vec![ex.y0];
        for j in 0..steps {
            let (_, _, next) = self.step(ex, &ys, j, h);
            ys.push(next);
        }
        ys
    }
}

/// Evaluates expression text directly, without building a tree.
///
/// Returns `Err` for syntax errors, `Ok(None)` where evaluation leaves the
/// real domain (log of a non-positive number, sqrt of a negative number,
/// division by zero, a power that is not a real number) and `Ok(Some(v))`
/// otherwise.
pub fn eval_text(text: &str, x: f64, t: f64, y: f64) -> Result<Option<f64>, String> {
    let mut ev = TextEval {
        chars: text.chars().filter(|c| !c.is_whitespace()).collect(),
        pos: 0,
        vars: [x, t, y],
        domain_ok: true,
    };
    let value = ev.sum()?;
    if ev.pos != ev.chars.len() {
        return Err(format!("unexpected trailing input at {}", ev.pos));
    }
    Ok(ev.domain_ok.then_some(value))
}

struct TextEval {
    chars: Vec<char>,
    pos: usize,
    vars: [f64; 3],
    domain_ok: bool,
}

impl TextEval {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<f64, String> {
        let mut acc = self.product()?;
        loop {
            if self.eat('+') {
                acc += self.product()?;
            } else if self.eat('-') {
                acc -= self.product()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<f64, String> {
        let mut acc = self.signed()?;
        loop {
            if self.eat('*') {
                acc *= self.signed()?;
            } else if self.eat('/') {
                let d = self.signed()?;
                if d == 0.0 {
                    self.domain_ok = false;
                }
                acc /= d;
            } else {
                return Ok(acc);
            }
        }
    }

    fn signed(&mut self) -> Result<f64, String> {
        if self.eat('-') {
            return Ok(-self.signed()?);
        }
        let base = self.atom()?;
        if self.eat('^') {
            let exponent = self.signed()?;
            let value = base.powf(exponent);
            if value.is_nan() && !base.is_nan() && !exponent.is_nan() {
                self.domain_ok = false;
            }
            return Ok(value);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<f64, String> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.sum()?;
                if !self.eat(')') {
                    return Err(format!("missing ')' at {}", self.pos));
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.literal(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
                {
                    self.pos += 1;
                }
                let word: String = self.chars[start..self.pos].iter().collect();
                match word.as_str() {
                    "x" => Ok(self.vars[0]),
                    "t" => Ok(self.vars[1]),
                    "y" => Ok(self.vars[2]),
                    _ => {
                        if !self.eat('(') {
                            return Err(format!("'{word}' is not a variable"));
                        }
                        let a = self.sum()?;
                        if !self.eat(')') {
                            return Err(format!("missing ')' after {word}"));
                        }
                        self.call(&word, a)
                    }
                }
            }
            other => Err(format!("unexpected {other:?} at {}", self.pos)),
        }
    }

    fn call(&mut self, name: &str, a: f64) -> Result<f64, String> {
        Ok(match name {
            "sin" => a.sin(),
            "cos" => a.cos(),
            "tan" => a.tan(),
            "exp" => a.exp(),
            "abs" => a.abs(),
            "log" => {
                if a <= 0.0 || a.is_nan() {
                    self.domain_ok = false;
                }
                a.ln()
            }
            "sqrt" => {
                if a < 0.0 || a.is_nan() {
                    self.domain_ok = false;
                }
                a.sqrt()
            }
            _ => return Err(format!("unknown function '{name}'")),
        })
    }

    fn literal(&mut self) -> Result<f64, String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '.') {
            self.pos += 1;
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            self.pos += 1;
            if matches!(self.peek(), Some('+' | '-')) {
                self.pos += 1;
            }
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().map_err(|_| format!("bad literal '{text}'"))
    }
}
