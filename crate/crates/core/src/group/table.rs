use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Multiplication table of a finite group, `mul[a][b] = a·b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    mul: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl GroupTable {
    /// Validates closure, associativity, identity and inverses.
    pub fn new(mul: Vec<Vec<usize>>) -> Result<Self> {
        let n = mul.len();
        if n == 0 {
            return Err(Error::InvalidGroupTable("empty table".into()));
        }
        for (i, row) in mul.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroupTable(format!("row {i} has length {}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidGroupTable(format!("entry {bad} out of range in row {i}")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(Error::InvalidGroupTable(format!(
                            "not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| mul[e][a] == a && mul[a][e] == a))
            .ok_or_else(|| Error::InvalidGroupTable("no identity element".into()))?;
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| mul[a][b] == identity && mul[b][a] == identity)
                .ok_or_else(|| Error::InvalidGroupTable(format!("element {a} has no inverse")))?;
            inverse.push(inv);
        }
        Ok(GroupTable {
            mul,
            identity,
            inverse,
        })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Z_n with elements 0..n and addition mod n.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group of order 0");
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        GroupTable {
            mul,
            identity: 0,
            inverse: (0..n).map(|a| (n - a) % n).collect(),
        }
    }

    /// Z_{n1} × … × Z_{nk}, elements in mixed radix with the last factor fastest.
    pub fn finite_abelian(factors: &[usize]) -> Result<Self> {
        if let Some(&f) = factors.iter().find(|&&f| f < 2) {
            return Err(Error::Input(format!("invariant factor {f} is below 2")));
        }
        let mut g = Self::trivial();
        for &f in factors {
            g = g.product(&Self::cyclic(f));
        }
        Ok(g)
    }

    /// Direct product; element `(a, b)` is encoded as `a * other.order() + b`.
    pub fn product(&self, other: &GroupTable) -> GroupTable {
        let (n, m) = (self.order(), other.order());
        let mul = (0..n * m)
            .map(|x| {
                (0..n * m)
                    .map(|y| self.mul[x / m][y / m] * m + other.mul[x % m][y % m])
                    .collect()
            })
            .collect();
        GroupTable {
            mul,
            identity: self.identity * m + other.identity,
            inverse: (0..n * m)
                .map(|x| self.inverse[x / m] * m + other.inverse[x % m])
                .collect(),
        }
    }

    /// The same set with `a ∘ b = b·a`.
    pub fn opposite(&self) -> GroupTable {
        let n = self.order();
        GroupTable {
            mul: (0..n).map(|a| (0..n).map(|b| self.mul[b][a]).collect()).collect(),
            identity: self.identity,
            inverse: self.inverse.clone(),
        }
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul[a][b] == self.mul[b][a]))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul[x][a];
            k += 1;
        }
        k
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> usize {
        (0..self.order()).map(|a| self.element_order(a)).fold(1, lcm)
    }

    /// A generating set found greedily in index order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut reached = vec![false; self.order()];
        reached[self.identity] = true;
        for a in 0..self.order() {
            if !reached[a] {
                gens.push(a);
                reached = self.closure(&gens);
            }
        }
        gens
    }

    fn closure(&self, gens: &[usize]) -> Vec<bool> {
        let mut reached = vec![false; self.order()];
        reached[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul[x][g];
                if !reached[y] {
                    reached[y] = true;
                    queue.push_back(y);
                }
            }
        }
        reached
    }

    /// Extends generator images to a map by walking words; `None` if the
    /// assignment is not a homomorphism.
    fn extend(&self, gens: &[usize], images: &[usize], target: &GroupTable) -> Option<Vec<usize>> {
        let mut map = vec![usize::MAX; self.order()];
        map[self.identity] = target.identity;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for (&g, &img) in gens.iter().zip(images) {
                let y = self.mul[x][g];
                let fy = target.mul[map[x]][img];
                if map[y] == usize::MAX {
                    map[y] = fy;
                    queue.push_back(y);
                } else if map[y] != fy {
                    return None;
                }
            }
        }
        let n = self.order();
        let ok = (0..n).all(|a| (0..n).all(|b| map[self.mul[a][b]] == target.mul[map[a]][map[b]]));
        ok.then_some(map)
    }

    /// All homomorphisms into `target`, each as the list of images of `0..order`.
    /// Enumeration order is lexicographic in the generator images, starting from
    /// the trivial homomorphism.
    pub fn homomorphisms(&self, target: &GroupTable) -> Vec<Vec<usize>> {
        let gens = self.generators();
        let m = target.order();
        // candidate order: identity first, then by index
        let candidates: Vec<usize> = std::iter::once(target.identity)
            .chain((0..m).filter(|&x| x != target.identity))
            .collect();
        let mut out = Vec::new();
        let mut choice = vec![0usize; gens.len()];
        loop {
            let images: Vec<usize> = choice.iter().map(|&c| candidates[c]).collect();
            let feasible = gens
                .iter()
                .zip(&images)
                .all(|(&g, &img)| self.element_order(g) % target.element_order(img) == 0);
            if feasible {
                if let Some(map) = self.extend(&gens, &images, target) {
                    out.push(map);
                }
            }
            // odometer, last generator fastest
            let mut k = gens.len();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                choice[k] += 1;
                if choice[k] < m {
                    break;
                }
                choice[k] = 0;
            }
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Characters of an abelian group as integer exponents: `χ_k(g) = exp(2πi·e[k][g]/N)`
/// with `N` the group exponent.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    pub modulus: usize,
    pub exponents: Vec<Vec<usize>>,
    /// Pointwise product of characters.
    pub dual: GroupTable,
}

impl CharacterTable {
    pub fn of(group: &GroupTable) -> Result<Self> {
        if !group.is_abelian() {
            return Err(Error::NotAbelian("character table requested".into()));
        }
        let modulus = group.exponent();
        let exponents = group.homomorphisms(&GroupTable::cyclic(modulus));
        let k = exponents.len();
        if k != group.order() {
            return Err(Error::Precondition(format!(
                "found {k} characters for a group of order {}",
                group.order()
            )));
        }
        let index_of = |e: &Vec<usize>| exponents.iter().position(|x| x == e);
        let mut mul = vec![vec![0; k]; k];
        for a in 0..k {
            for b in 0..k {
                let sum: Vec<usize> = (0..group.order())
                    .map(|g| (exponents[a][g] + exponents[b][g]) % modulus)
                    .collect();
                mul[a][b] = index_of(&sum).expect("characters closed under products");
            }
        }
        Ok(CharacterTable {
            modulus,
            dual: GroupTable::new(mul)?,
            exponents,
        })
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn value(&self, chi: usize, g: usize) -> num_complex::Complex64 {
        root_of_unity(self.exponents[chi][g], self.modulus)
    }
}

/// `exp(2πi·k/n)`, exact on the real and imaginary axes.
pub fn root_of_unity(k: usize, n: usize) -> num_complex::Complex64 {
    use num_complex::Complex64;
    let k = k % n;
    if 4 * k % n == 0 {
        return match 4 * k / n {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64)
}
