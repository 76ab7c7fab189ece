//! Λ(k, ℓ) and the x-threshold evaluated at 256 bits, sharing no code with
//! the log-space implementation.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

const P: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;

pub struct Oracle {
    cc: Consts,
}

impl Oracle {
    pub fn new() -> Self {
        Oracle { cc: Consts::new().unwrap() }
    }

    fn n(&self, v: f64) -> BigFloat {
        BigFloat::from_f64(v, P)
    }

    fn ln(&mut self, v: &BigFloat) -> BigFloat {
        v.ln(P, RM, &mut self.cc)
    }

    fn exp(&mut self, v: &BigFloat) -> BigFloat {
        v.exp(P, RM, &mut self.cc)
    }

    fn e(&mut self) -> BigFloat {
        let one = self.n(1.0);
        self.exp(&one)
    }

    pub fn to_f64(&mut self, v: &BigFloat) -> f64 {
        v.format(Radix::Dec, RM, &mut self.cc).unwrap().parse().unwrap()
    }

    /// log of a sum given the logs of its positive terms
    fn log_sum(&mut self, logs: &[BigFloat]) -> BigFloat {
        let top = logs.iter().fold(logs[0].clone(), |m, l| m.max(l));
        let mut acc = self.n(0.0);
        for l in logs {
            let gap = l.sub(&top, P, RM);
            // e^{-300} is far below 256 bits relative to the largest term
            if gap < self.n(-300.0) {
                continue;
            }
            let t = self.exp(&gap);
            acc = acc.add(&t, P, RM);
        }
        let l = self.ln(&acc);
        top.add(&l, P, RM)
    }

    /// ln Λ(k, ℓ) from the defining formulas.
    pub fn ln_lambda(&mut self, k: u32, ell: u32) -> BigFloat {
        let (kb, lb) = (self.n(k as f64), self.n(ell as f64));
        let ln_k = self.ln(&kb);
        let mul = |a: &BigFloat, b: &BigFloat| a.mul(b, P, RM);
        let add = |a: &BigFloat, b: &BigFloat| a.add(b, P, RM);

        // A = 125^k 1092 / k³
        let a = self.n(125.0).powi(k as usize, P, RM).mul(&self.n(1092.0), P, RM).div(&kb.powi(3, P, RM), P, RM);
        // B = ½ e^{4/e} k^{20ℓ}
        let e = self.e();
        let four_over_e = self.n(4.0).div(&e, P, RM);
        let e4e = self.exp(&four_over_e);
        let k20l = kb.powi(20 * ell as usize, P, RM);
        let b = mul(&mul(&self.n(0.5), &e4e), &k20l);
        // ln C = k^{16ℓ}(k − 1) ln(10ℓ(k − 1))
        let km1 = self.n(k as f64 - 1.0);
        let ten_l_km1 = mul(&mul(&self.n(10.0), &lb), &km1);
        let ln_c = mul(&mul(&kb.powi(16 * ell as usize, P, RM), &km1), &self.ln(&ten_l_km1));
        // ln D = log(A max(A, 2k^{5ℓA}) + [A < B](2A)^{−A/4} e^{B/e} k^{5ℓB} + 5)
        let ln_a = self.ln(&a);
        let five_l = mul(&self.n(5.0), &lb);
        let ln_two = self.ln(&self.n(2.0));
        let ln_pow = add(&ln_two, &mul(&mul(&five_l, &a), &ln_k));
        let ln_main = add(&ln_a, &ln_a.max(&ln_pow));
        let mut d_terms = vec![ln_main, self.ln(&self.n(5.0))];
        if a < b {
            let two_a = mul(&self.n(2.0), &a);
            let t1 = mul(&a.div(&self.n(-4.0), P, RM), &self.ln(&two_a));
            let t2 = b.div(&e, P, RM);
            let t3 = mul(&mul(&five_l, &b), &ln_k);
            d_terms.push(add(&add(&t1, &t2), &t3));
        }
        let ln_d = self.log_sum(&d_terms);
        // Λ = 12ℓ k^{6ℓ} + 5ℓ C + 9ℓ D
        let twelve_l = mul(&self.n(12.0), &lb);
        let t0 = add(&self.ln(&twelve_l), &mul(&self.n(6.0 * ell as f64), &ln_k));
        let t1 = add(&self.ln(&five_l), &ln_c);
        let nine_l = mul(&self.n(9.0), &lb);
        let t2 = add(&self.ln(&nine_l), &ln_d);
        self.log_sum(&[t0, t1, t2])
    }

    /// ln ln x_thr(ℓ) = 28 ln 7 + 28 ln(192eℓ) ln(12eℓ)
    pub fn ln_ln_threshold(&mut self, ell: u32) -> BigFloat {
        let e = self.e();
        let lb = self.n(ell as f64);
        let a = self.ln(&self.n(192.0).mul(&e, P, RM).mul(&lb, P, RM));
        let b = self.ln(&self.n(12.0).mul(&e, P, RM).mul(&lb, P, RM));
        let ln7 = self.ln(&self.n(7.0));
        let t28 = self.n(28.0);
        t28.mul(&ln7, P, RM).add(&t28.mul(&a, P, RM).mul(&b, P, RM), P, RM)
    }
}
