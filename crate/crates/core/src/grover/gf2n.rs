//! Arithmetic in `GF(2^n)` with elements stored in the polynomial basis
//! `{1, α, …, α^{n−1}}` (bit `i` is the coefficient of `α^i`).

/// Field tables for one degree.
#[derive(Debug, Clone)]
pub struct Gf2n {
    n: u32,
    modulus: u64,
    trace_mask: u32,
    inverse: Vec<u32>,
    log: Vec<u32>,
    exp: Vec<u32>,
}

impl Gf2n {
    /// Builds the field from the smallest irreducible polynomial of degree `n`.
    pub fn new(n: u32) -> Self {
        assert!((1..=24).contains(&n), "degree {n} unsupported");
        let modulus = (1u64 << n..1u64 << (n + 1))
            .find(|&p| is_irreducible(p))
            .expect("irreducible polynomials exist in every degree");
        let mut field = Self {
            n,
            modulus,
            trace_mask: 0,
            inverse: Vec::new(),
            log: Vec::new(),
            exp: Vec::new(),
        };
        let order = (1u32 << n) - 1;
        let generator = if order == 1 {
            1
        } else {
            (2..=order)
                .find(|&g| field.multiplicative_order(g) == order)
                .expect("the multiplicative group is cyclic")
        };
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![0u32; 1 << n];
        let mut p = 1u32;
        for i in 0..order {
            exp.push(p);
            log[p as usize] = i;
            p = field.mul_slow(p, generator);
        }
        field.trace_mask = (0..n)
            .filter(|&i| field.trace_slow(1 << i) == 1)
            .fold(0, |m, i| m | 1 << i);
        field.inverse = (0..1u32 << n).map(|a| field.inv_slow(a)).collect();
        field.log = log;
        field.exp = exp;
        field
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn size(&self) -> usize {
        1 << self.n
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let order = self.exp.len() as u32;
        let e = (self.log[a as usize] + self.log[b as usize]) % order;
        self.exp[e as usize]
    }

    fn multiplicative_order(&self, g: u32) -> u32 {
        let mut p = g;
        let mut k = 1;
        while p != 1 {
            p = self.mul_slow(p, g);
            k += 1;
        }
        k
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let mut product = clmul(a as u64, b as u64);
        for bit in (self.n as u64..2 * self.n as u64).rev() {
            if (product >> bit) & 1 == 1 {
                product ^= self.modulus << (bit - self.n as u64);
            }
        }
        product as u32
    }

    /// Multiplicative inverse, with `0 ↦ 0`.
    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    /// Absolute trace `a + a² + a⁴ + … + a^{2^{n−1}}`, which lies in `{0, 1}`.
    pub fn trace(&self, a: u32) -> u32 {
        (a & self.trace_mask).count_ones() & 1
    }

    fn trace_slow(&self, a: u32) -> u32 {
        let mut acc = 0;
        let mut p = a;
        for _ in 0..self.n {
            acc ^= p;
            p = self.mul_slow(p, p);
        }
        debug_assert!(acc <= 1);
        acc
    }

    fn inv_slow(&self, a: u32) -> u32 {
        // a^{2^n − 2}
        let mut result = 1u32;
        let mut base = a;
        let mut e = (1u64 << self.n) - 2;
        if a == 0 {
            return 0;
        }
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul_slow(result, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        result
    }

    /// The linear bijection `w ↦ (Tr(α^i w))_i` onto coordinate vectors.
    pub fn trace_coordinates(&self, w: u32) -> u32 {
        (0..self.n).fold(0, |acc, i| acc | self.trace(self.mul(w, 1 << i)) << i)
    }

    /// Elements of trace one in increasing order.
    pub fn trace_one_elements(&self) -> Vec<u32> {
        (0..1u32 << self.n)
            .filter(|&a| self.trace(a) == 1)
            .collect()
    }
}

fn clmul(a: u64, b: u64) -> u64 {
    (0..32)
        .filter(|i| (b >> i) & 1 == 1)
        .fold(0, |acc, i| acc ^ (a << i))
}

fn degree(p: u64) -> u32 {
    63 - p.leading_zeros()
}

fn poly_mod(mut a: u64, m: u64) -> u64 {
    let dm = degree(m);
    while a != 0 && degree(a) >= dm {
        a ^= m << (degree(a) - dm);
    }
    a
}

/// Trial division by every polynomial of degree `1..=deg/2`.
fn is_irreducible(p: u64) -> bool {
    let d = degree(p);
    if d == 0 {
        return false;
    }
    (2u64..1 << (d / 2 + 1)).all(|q| poly_mod(p, q) != 0)
}
