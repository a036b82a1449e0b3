//! Min-plus bookkeeping of error orders under π/3 correction.
//!
//! An [`OrderTriple`] `(a;b;c)` records the leading orders of the x, y, z
//! error components. The rules are stated for an X correction; Y and Z
//! corrections cyclically relabel the components so the correction axis
//! occupies the x slot, apply the X rule, and relabel back.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(u32),
    Infinite,
}

pub use Order::Infinite as INF;

impl Order {
    pub fn min(self, o: Order) -> Order {
        if self <= o {
            self
        } else {
            o
        }
    }

    pub fn min_of(items: &[Order]) -> Order {
        items.iter().copied().fold(Order::Infinite, Order::min)
    }
}

impl PartialOrd for Order {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Order {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Order::Finite(a), Order::Finite(b)) => a.cmp(b),
            (Order::Finite(_), Order::Infinite) => Ordering::Less,
            (Order::Infinite, Order::Finite(_)) => Ordering::Greater,
            (Order::Infinite, Order::Infinite) => Ordering::Equal,
        }
    }
}

impl Add for Order {
    type Output = Order;
    fn add(self, o: Order) -> Order {
        match (self, o) {
            (Order::Finite(a), Order::Finite(b)) => Order::Finite(a + b),
            _ => Order::Infinite,
        }
    }
}

impl Add<u32> for Order {
    type Output = Order;
    fn add(self, k: u32) -> Order {
        self + Order::Finite(k)
    }
}

impl From<u32> for Order {
    fn from(v: u32) -> Self {
        Order::Finite(v)
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(v) => write!(f, "{v}"),
            Order::Infinite => f.write_str("∞"),
        }
    }
}

impl FromStr for Order {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "∞" | "infinity" => Ok(Order::Infinite),
            t => t
                .parse::<u32>()
                .map(Order::Finite)
                .map_err(|_| Error::Config(format!("bad order `{s}`"))),
        }
    }
}

fn two(o: Order) -> Order {
    o + o
}

fn three(o: Order) -> Order {
    o + o + o
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OrderTriple {
    pub a: Order,
    pub b: Order,
    pub c: Order,
}

impl OrderTriple {
    pub fn new(a: impl Into<Order>, b: impl Into<Order>, c: impl Into<Order>) -> Self {
        OrderTriple { a: a.into(), b: b.into(), c: c.into() }
    }

    pub fn min(&self) -> Order {
        Order::min_of(&[self.a, self.b, self.c])
    }

    /// Sum of the orders (infinite if any is).
    pub fn sum(&self) -> Order {
        self.a + self.b + self.c
    }

    pub fn to_array(&self) -> [Order; 3] {
        [self.a, self.b, self.c]
    }
}

impl From<[Order; 3]> for OrderTriple {
    fn from([a, b, c]: [Order; 3]) -> Self {
        OrderTriple { a, b, c }
    }
}

impl fmt::Display for OrderTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};{};{})", self.a, self.b, self.c)
    }
}

impl FromStr for OrderTriple {
    type Err = Error;
    /// `a,b,c` or `(a;b;c)`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = inner.split([',', ';']).map(str::parse).collect::<Result<Vec<Order>>>()?;
        let arr: [Order; 3] = parts
            .try_into()
            .map_err(|_| Error::Config(format!("expected three orders, got `{s}`")))?;
        Ok(arr.into())
    }
}

/// Orders `(d,e,f)` of a correction pulse's error vector, in that pulse's
/// own frame (d along the correction axis).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DeltaOrders {
    pub d: Order,
    pub e: Order,
    pub f: Order,
}

impl DeltaOrders {
    pub fn new(d: impl Into<Order>, e: impl Into<Order>, f: impl Into<Order>) -> Self {
        DeltaOrders { d: d.into(), e: e.into(), f: f.into() }
    }

    pub fn perfect() -> Self {
        DeltaOrders { d: INF, e: INF, f: INF }
    }

    /// First-order over-rotation of the correction pulses.
    pub fn over_rotation() -> Self {
        DeltaOrders::new(1, INF, INF)
    }
}

impl FromStr for DeltaOrders {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t: OrderTriple = s.parse()?;
        Ok(DeltaOrders { d: t.a, e: t.b, f: t.c })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn parse(s: &str) -> Result<Axis> {
        match s.trim() {
            "X" | "x" => Ok(Axis::X),
            "Y" | "y" => Ok(Axis::Y),
            "Z" | "z" => Ok(Axis::Z),
            other => Err(Error::Config(format!("bad axis `{other}`"))),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "X",
            Axis::Y => "Y",
            Axis::Z => "Z",
        })
    }
}

/// Applies an X-axis rule for a correction about `axis`.
fn relabeled(t: OrderTriple, axis: Axis, rule: impl Fn(Order, Order, Order) -> [Order; 3]) -> OrderTriple {
    let OrderTriple { a, b, c } = t;
    match axis {
        Axis::X => rule(a, b, c).into(),
        Axis::Y => {
            let [ry, rz, rx] = rule(b, c, a);
            OrderTriple { a: rx, b: ry, c: rz }
        }
        Axis::Z => {
            let [rz, rx, ry] = rule(c, a, b);
            OrderTriple { a: rx, b: ry, c: rz }
        }
    }
}

/// Perfect correction pulses: `(min(a,2b,2c); min(3b,b+2c); min(3c,c+2b))`.
pub fn correct_perfect(t: OrderTriple, axis: Axis) -> OrderTriple {
    relabeled(t, axis, |a, b, c| {
        [
            Order::min_of(&[a, two(b), two(c)]),
            Order::min_of(&[three(b), b + two(c)]),
            Order::min_of(&[three(c), c + two(b)]),
        ]
    })
}

/// Correction pulses with covariant errors of orders `dl`.
pub fn correct_covariant(t: OrderTriple, dl: DeltaOrders, axis: Axis) -> OrderTriple {
    let DeltaOrders { d, e, f } = dl;
    relabeled(t, axis, |a, b, c| {
        [
            Order::min_of(&[a, e + b, f + b, two(b), e + c, f + c, two(c)]),
            Order::min_of(&[
                e + a,
                f + a,
                d + b,
                e + f + b,
                two(f) + b,
                e + two(b),
                f + two(b),
                three(b),
                two(e) + c,
                e + f + c,
                two(f) + c,
                e + two(c),
                f + two(c),
                b + two(c),
            ]),
            Order::min_of(&[
                e + a,
                f + a,
                two(e) + b,
                e + f + b,
                two(f) + b,
                e + two(b),
                f + two(b),
                d + c,
                two(e) + c,
                e + f + c,
                two(b) + c,
                e + two(c),
                f + two(c),
                three(c),
            ]),
        ]
    })
}

/// First-order over-rotation δ on R̄_0 and δ̂ on R̄_t.
pub fn correct_axis_dependent(t: OrderTriple, axis: Axis) -> OrderTriple {
    relabeled(t, axis, |a, b, c| {
        [
            Order::min_of(&[a, two(b), two(c)]),
            Order::min_of(&[three(b), b + two(c), b + 1, c + 1]),
            Order::min_of(&[three(c), c + two(b), b + 1, c + 1]),
        ]
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Perfect,
    Covariant(DeltaOrders),
    AxisDependent,
}

impl Regime {
    pub fn apply(&self, t: OrderTriple, axis: Axis) -> OrderTriple {
        match self {
            Regime::Perfect => correct_perfect(t, axis),
            Regime::Covariant(dl) => correct_covariant(t, *dl, axis),
            Regime::AxisDependent => correct_axis_dependent(t, axis),
        }
    }

    pub fn chain(&self, start: OrderTriple, axes: &[Axis]) -> OrderTriple {
        axes.iter().fold(start, |t, &ax| self.apply(t, ax))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Goal {
    /// Stop once every component has at least this order.
    MinOrder(u32),
    /// Apply exactly this many corrections.
    Depth(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plan {
    pub schedule: Vec<Axis>,
    /// Triple after each step, starting with the initial one.
    pub trace: Vec<OrderTriple>,
    pub target_pulses: u128,
    pub correction_pulses: u128,
}

impl Plan {
    pub fn final_triple(&self) -> OrderTriple {
        *self.trace.last().expect("trace holds the start triple")
    }
}

pub const DEFAULT_MAX_DEPTH: usize = 12;
const HARD_MAX_DEPTH: usize = 60;

/// Pulse counts `(3^k, n_k − 3^k)` of a k-level concatenation, with
/// `n_k = 3 n_{k−1} + 4`, `n_0 = 1`.
pub fn pulse_counts(depth: usize) -> (u128, u128) {
    let (mut n, mut t) = (1u128, 1u128);
    for _ in 0..depth {
        n = 3 * n + 4;
        t *= 3;
    }
    (t, n - t)
}

fn better(cand: OrderTriple, best: OrderTriple) -> bool {
    (cand.min(), cand.sum()) > (best.min(), best.sum())
}

/// Greedy schedule: each step takes the axis maximizing the resulting
/// minimum order, then the sum of orders, then preferring X over Y over Z.
pub fn plan(start: OrderTriple, regime: Regime, goal: Goal, max_depth: usize) -> Result<Plan> {
    let max_depth = max_depth.min(HARD_MAX_DEPTH);
    let steps = match goal {
        Goal::Depth(d) if d > max_depth => {
            return Err(Error::Planning(format!("depth {d} exceeds maximum {max_depth}")))
        }
        Goal::Depth(d) => d,
        Goal::MinOrder(_) => max_depth,
    };
    let reached = |t: &OrderTriple| matches!(goal, Goal::MinOrder(g) if t.min() >= Order::Finite(g));
    let mut trace = vec![start];
    let mut schedule = Vec::new();
    let mut cur = start;
    while schedule.len() < steps && !reached(&cur) {
        let (axis, next) = Axis::ALL
            .iter()
            .map(|&ax| (ax, regime.apply(cur, ax)))
            .reduce(|best, cand| if better(cand.1, best.1) { cand } else { best })
            .expect("three axes");
        schedule.push(axis);
        trace.push(next);
        cur = next;
    }
    if let Goal::MinOrder(g) = goal {
        if !reached(&cur) {
            return Err(Error::Planning(format!(
                "minimum order {g} not reached within {max_depth} levels (got {cur})"
            )));
        }
    }
    let (target_pulses, correction_pulses) = pulse_counts(schedule.len());
    Ok(Plan { schedule, trace, target_pulses, correction_pulses })
}
