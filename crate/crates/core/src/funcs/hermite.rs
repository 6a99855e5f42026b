use crate::C64;

/// Probabilists' Hermite polynomial `He_n(x)` by the three-term recurrence
/// `He_{n+1} = x He_n − n He_{n−1}`.
pub fn hermite_eval(n: usize, x: C64) -> C64 {
    let mut prev = C64::new(1.0, 0.0);
    if n == 0 {
        return prev;
    }
    let mut cur = x;
    for k in 1..n {
        let next = x * cur - prev * k as f64;
        prev = cur;
        cur = next;
    }
    cur
}

/// Successive `He_n(x)` for a fixed `x`, extended on demand.
#[derive(Debug, Clone)]
pub struct HermiteCache {
    x: C64,
    values: Vec<C64>,
}

impl HermiteCache {
    pub fn new(x: C64) -> Self {
        Self { x, values: vec![C64::new(1.0, 0.0), x] }
    }

    pub fn get(&mut self, n: usize) -> C64 {
        while self.values.len() <= n {
            let k = self.values.len() - 1;
            let next = self.x * self.values[k] - self.values[k - 1] * k as f64;
            self.values.push(next);
        }
        self.values[n]
    }
}
