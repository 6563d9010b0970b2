use std::fmt;

use crate::ring::Ring;

/// 2×2 matrix `[[a, b], [c, d]]` over a (possibly noncommutative) ring.
#[derive(Clone, PartialEq)]
pub struct Mat2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Ring> Mat2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn scalar(s: T) -> Self {
        let z = s.zero();
        Mat2 { a: s.clone(), b: z.clone(), c: z, d: s }
    }

    pub fn trace(&self) -> T {
        self.a.add(&self.d)
    }

    /// `ad - bc`, meaningful when entries commute.
    pub fn det(&self) -> T {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }

    pub fn apply(&self, v: &(T, T)) -> (T, T) {
        (self.a.mul(&v.0).add(&self.b.mul(&v.1)), self.c.mul(&v.0).add(&self.d.mul(&v.1)))
    }

    pub fn map(&self, f: impl Fn(&T) -> T) -> Self {
        Mat2 { a: f(&self.a), b: f(&self.b), c: f(&self.c), d: f(&self.d) }
    }

    pub fn entries(&self) -> [&T; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }
}

impl<T: Ring> fmt::Display for Mat2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl<T: Ring> fmt::Debug for Mat2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<T: Ring> Ring for Mat2<T> {
    fn zero(&self) -> Self {
        Mat2::scalar(self.a.zero())
    }
    fn one(&self) -> Self {
        Mat2::scalar(self.a.one())
    }
    fn from_int(&self, n: i64) -> Self {
        Mat2::scalar(self.a.from_int(n))
    }
    fn is_zero(&self) -> bool {
        self.entries().iter().all(|e| e.is_zero())
    }
    fn add(&self, r: &Self) -> Self {
        Mat2 { a: self.a.add(&r.a), b: self.b.add(&r.b), c: self.c.add(&r.c), d: self.d.add(&r.d) }
    }
    fn sub(&self, r: &Self) -> Self {
        Mat2 { a: self.a.sub(&r.a), b: self.b.sub(&r.b), c: self.c.sub(&r.c), d: self.d.sub(&r.d) }
    }
    fn mul(&self, r: &Self) -> Self {
        Mat2 {
            a: self.a.mul(&r.a).add(&self.b.mul(&r.c)),
            b: self.a.mul(&r.b).add(&self.b.mul(&r.d)),
            c: self.c.mul(&r.a).add(&self.d.mul(&r.c)),
            d: self.c.mul(&r.b).add(&self.d.mul(&r.d)),
        }
    }
    fn neg(&self) -> Self {
        self.map(|e| e.neg())
    }
    fn characteristic(&self) -> u64 {
        self.a.characteristic()
    }
    fn scale_int(&self, n: i64) -> Self {
        self.map(|e| e.scale_int(n))
    }
}
