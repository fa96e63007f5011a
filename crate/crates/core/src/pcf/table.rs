use super::{Pcf, PcfError};
use rug::Integer;

/// Exact convergents p_n, q_n for n = −1..=depth and the running products ∏_{i≤n} b(i).
#[derive(Debug, Clone)]
pub struct ConvergentTable {
    pcf: Pcf,
    /// p[n + 1] = p_n
    p: Vec<Integer>,
    q: Vec<Integer>,
    /// bprod[n] = ∏_{i=1..n} b(i), bprod[0] = 1
    bprod: Vec<Integer>,
    truncated_at: Option<usize>,
}

impl ConvergentTable {
    /// Assembles a table without checking the recursion; used for deserialized or
    /// deliberately altered data. `bprod` is recomputed from the PCF.
    pub fn from_parts(pcf: Pcf, p: Vec<Integer>, q: Vec<Integer>) -> ConvergentTable {
        assert_eq!(p.len(), q.len(), "p and q lengths differ");
        assert!(p.len() >= 2, "table needs p_-1 and p_0");
        let depth = p.len() - 2;
        let mut bprod = Vec::with_capacity(depth + 1);
        bprod.push(Integer::from(1));
        let mut truncated_at = None;
        for n in 1..=depth {
            let bn = pcf.b.eval_i64(n as i64);
            if bn == 0 && truncated_at.is_none() {
                truncated_at = Some(n);
            }
            let next = Integer::from(&bprod[n - 1] * &bn);
            bprod.push(next);
        }
        ConvergentTable { pcf, p, q, bprod, truncated_at }
    }

    pub fn pcf(&self) -> &Pcf {
        &self.pcf
    }

    pub fn depth(&self) -> usize {
        self.p.len() - 2
    }

    /// p_n for n ≥ −1.
    pub fn p(&self, n: i64) -> &Integer {
        &self.p[(n + 1) as usize]
    }

    pub fn q(&self, n: i64) -> &Integer {
        &self.q[(n + 1) as usize]
    }

    /// ∏_{i=1..n} b(i).
    pub fn bprod(&self, n: usize) -> &Integer {
        &self.bprod[n]
    }

    /// First n ≥ 1 with b(n) = 0, where the fraction terminates.
    pub fn truncated_at(&self) -> Option<usize> {
        self.truncated_at
    }

    pub fn is_degenerate(&self) -> bool {
        self.truncated_at.is_some()
    }

    /// n such that u_n = a(n)u_{n−1} + b(n)u_{n−2} fails for p or q, if any.
    pub fn recursion_violation(&self) -> Option<usize> {
        let mut t = Integer::new();
        for n in 1..=self.depth() {
            let an = self.pcf.a.eval_i64(n as i64);
            let bn = self.pcf.b.eval_i64(n as i64);
            for u in [&self.p, &self.q] {
                t.assign_mul_add(&an, &u[n], &bn, &u[n - 1]);
                if t != u[n + 1] {
                    return Some(n);
                }
            }
        }
        let a0 = self.pcf.a.eval_i64(0);
        if self.p[0] != 1 || self.p[1] != a0 || self.q[0] != 0 || self.q[1] != 1 {
            return Some(0);
        }
        None
    }
}

trait MulAdd {
    fn assign_mul_add(&mut self, a: &Integer, x: &Integer, b: &Integer, y: &Integer);
}

impl MulAdd for Integer {
    fn assign_mul_add(&mut self, a: &Integer, x: &Integer, b: &Integer, y: &Integer) {
        use rug::Assign;
        self.assign(a * x);
        *self += b * y;
    }
}

/// Exact convergents to `depth` with the standard initial conditions
/// p_{−1}=1, p_0=a(0), q_{−1}=0, q_0=1.
pub fn convergents(pcf: &Pcf, depth: usize) -> Result<ConvergentTable, PcfError> {
    let mut p = Vec::with_capacity(depth + 2);
    let mut q = Vec::with_capacity(depth + 2);
    let mut bprod = Vec::with_capacity(depth + 1);
    p.push(Integer::from(1));
    p.push(pcf.a.eval_i64(0));
    q.push(Integer::from(0));
    q.push(Integer::from(1));
    bprod.push(Integer::from(1));
    let mut truncated_at = None;
    for n in 1..=depth {
        let an = pcf.a.eval_i64(n as i64);
        let bn = pcf.b.eval_i64(n as i64);
        if bn == 0 && truncated_at.is_none() {
            truncated_at = Some(n);
        }
        let mut pn = Integer::new();
        pn.assign_mul_add(&an, &p[n], &bn, &p[n - 1]);
        let mut qn = Integer::new();
        qn.assign_mul_add(&an, &q[n], &bn, &q[n - 1]);
        if qn == 0 && q[n] == 0 {
            return Err(PcfError::DegenerateAtDepth(n));
        }
        let bp = Integer::from(&bprod[n - 1] * &bn);
        p.push(pn);
        q.push(qn);
        bprod.push(bp);
    }
    Ok(ConvergentTable { pcf: pcf.clone(), p, q, bprod, truncated_at })
}

/// p_{n+1}q_n − p_n q_{n+1} = (−1)^n ∏_{i=1}^{n+1} b(i) for every −1 ≤ n < depth.
pub fn determinant_check(table: &ConvergentTable) -> bool {
    let depth = table.depth() as i64;
    let mut lhs = Integer::new();
    for n in -1..depth {
        lhs.assign_mul_add(table.p(n + 1), table.q(n), &Integer::from(-table.p(n)), table.q(n + 1));
        let mut rhs = Integer::from(table.bprod((n + 1) as usize));
        if n.rem_euclid(2) == 1 {
            rhs = -rhs;
        }
        if lhs != rhs {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apery() -> Pcf {
        Pcf::from_coeffs(&[5, 27, 51, 34], &[0, 0, 0, 0, 0, 0, -1])
    }

    #[test]
    fn apery_depth_one() {
        let t = convergents(&apery(), 1).unwrap();
        assert_eq!([t.p(-1), t.p(0), t.p(1)], [&Integer::from(1), &Integer::from(5), &Integer::from(584)]);
        assert_eq!([t.q(-1), t.q(0), t.q(1)], [&Integer::from(0), &Integer::from(1), &Integer::from(117)]);
        assert!(determinant_check(&t));
    }

    #[test]
    fn fibonacci() {
        let t = convergents(&Pcf::from_coeffs(&[1], &[1]), 60).unwrap();
        let mut fib = vec![Integer::from(0), Integer::from(1)];
        for i in 2..70 {
            let f = Integer::from(&fib[i - 1] + &fib[i - 2]);
            fib.push(f);
        }
        for n in 0..=60 {
            assert_eq!(t.p(n), &fib[(n + 2) as usize]);
            assert_eq!(t.q(n), &fib[(n + 1) as usize]);
        }
        assert!(determinant_check(&t));
    }

    #[test]
    fn depth_zero() {
        let t = convergents(&Pcf::from_coeffs(&[7, 1], &[1, 1]), 0).unwrap();
        assert_eq!(t.depth(), 0);
        assert_eq!((t.p(-1), t.p(0), t.q(-1), t.q(0)), (&Integer::from(1), &Integer::from(7), &Integer::from(0), &Integer::from(1)));
    }

    #[test]
    fn corrupted_table_fails_checks() {
        let t = convergents(&apery(), 30).unwrap();
        assert!(determinant_check(&t) && t.recursion_violation().is_none());
        let mut p: Vec<Integer> = (-1..=30).map(|n| t.p(n).clone()).collect();
        let q: Vec<Integer> = (-1..=30).map(|n| t.q(n).clone()).collect();
        p[17] += 1;
        let bad = ConvergentTable::from_parts(apery(), p, q);
        assert!(!determinant_check(&bad));
        assert_eq!(bad.recursion_violation(), Some(16));
    }

    #[test]
    fn truncation_flagged() {
        // b(3) = 0
        let t = convergents(&Pcf::from_coeffs(&[1, 1], &[-3, 1]), 10).unwrap();
        assert_eq!(t.truncated_at(), Some(3));
        assert_eq!(*t.bprod(5), 0);
        assert!(determinant_check(&t));
    }

    #[test]
    fn collapse_detected() {
        // a(1) = 0 and b(2) = 0 force q_1 = q_2 = 0.
        let r = convergents(&Pcf::from_coeffs(&[-1, 1], &[-2, 1]), 5);
        assert_eq!(r.unwrap_err(), PcfError::DegenerateAtDepth(2));
    }
}
