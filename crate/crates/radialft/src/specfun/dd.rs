//! Double-double arithmetic (error-free transforms) for series whose
//! alternating terms dwarf their sum. The extra limb buys ~32 digits, which
//! absorbs cancellation factors up to ~1e15 without losing the f64 target
//! precision.

#[derive(Clone, Copy)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

pub(crate) fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    Dd {
        hi: s,
        lo: (a - (s - bb)) + (b - bb),
    }
}

pub(crate) fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    let split = |v: f64| {
        let t = 134217729.0 * v;
        let hi = t - (t - v);
        (hi, v - hi)
    };
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    Dd {
        hi: p,
        lo: ((ah * bh - p) + ah * bl + al * bh) + al * bl,
    }
}

impl Dd {
    pub fn from(v: f64) -> Dd {
        Dd { hi: v, lo: 0.0 }
    }

    pub fn value(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.hi, o.hi);
        let lo = s.lo + self.lo + o.lo;
        two_sum(s.hi, lo)
    }

    pub fn mul(self, o: Dd) -> Dd {
        let p = two_prod(self.hi, o.hi);
        let lo = p.lo + self.hi * o.lo + self.lo * o.hi;
        two_sum(p.hi, lo)
    }

    pub fn mul_f64(self, b: f64) -> Dd {
        let p = two_prod(self.hi, b);
        let lo = p.lo + self.lo * b;
        two_sum(p.hi, lo)
    }

    pub fn div_f64(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        let prod = two_prod(q1, b);
        let r = self.add(Dd {
            hi: -prod.hi,
            lo: -prod.lo,
        });
        let q2 = (r.hi + r.lo) / b;
        two_sum(q1, q2)
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let prod = o.mul(Dd::from(q1));
        let r = self.add(prod.neg());
        let q2 = (r.hi + r.lo) / o.hi;
        two_sum(q1, q2)
    }

    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}
