//! Decision procedures with certificates.
//!
//! A finite nonempty category has naturally isomorphic limits and colimits in
//! `Set` exactly when it is connected and has an invariant system made of
//! singletons. In modules over a ring `R` the condition is per connected
//! component: each component must have an invariant system whose slot size is
//! invertible in `R`. The empty category qualifies exactly when the target
//! category has a zero object.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::category::{CategoryError, ComponentPartition, Embedding, FinCategory, StrongConnectivity};
use crate::invariant::{find_is, InvariantSystem, IsSearch, SeedOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingSpec {
    Integers,
    Rationals,
    IntegersMod(u64),
    PrimeField(u64),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unknown ring `{0}` (expected z, q, zmod:<n> or fp:<p>)")]
    Unknown(String),
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl RingSpec {
    pub fn integers_mod(n: u64) -> Result<Self, RingError> {
        if n < 2 {
            return Err(RingError::ModulusTooSmall(n));
        }
        Ok(RingSpec::IntegersMod(n))
    }

    pub fn prime_field(p: u64) -> Result<Self, RingError> {
        if !is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        Ok(RingSpec::PrimeField(p))
    }

    /// Whether the integer `m ≥ 1` is a unit in this ring.
    pub fn invertible(&self, m: u64) -> bool {
        assert!(m >= 1, "invertibility is only asked of positive integers");
        match *self {
            RingSpec::Integers => m == 1,
            RingSpec::Rationals => true,
            RingSpec::IntegersMod(n) => gcd(m, n) == 1,
            RingSpec::PrimeField(p) => m % p != 0,
        }
    }
}

pub fn invertible(ring: RingSpec, m: u64) -> bool {
    ring.invertible(m)
}

impl FromStr for RingSpec {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| t.parse::<u64>().map_err(|_| RingError::Unknown(s.to_string()));
        match s {
            "z" => Ok(RingSpec::Integers),
            "q" => Ok(RingSpec::Rationals),
            _ => {
                if let Some(n) = s.strip_prefix("zmod:") {
                    RingSpec::integers_mod(num(n)?)
                } else if let Some(p) = s.strip_prefix("fp:") {
                    RingSpec::prime_field(num(p)?)
                } else {
                    Err(RingError::Unknown(s.to_string()))
                }
            }
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => write!(f, "z"),
            RingSpec::Rationals => write!(f, "q"),
            RingSpec::IntegersMod(n) => write!(f, "zmod:{n}"),
            RingSpec::PrimeField(p) => write!(f, "fp:{p}"),
        }
    }
}

/// An invariant system found on one connected component.
#[derive(Clone, Debug)]
pub struct ComponentSystem {
    pub component: usize,
    /// The component as a category in its own right.
    pub subcategory: FinCategory,
    pub embedding: Embedding,
    pub system: InvariantSystem,
}

impl ComponentSystem {
    pub fn cardinality(&self) -> usize {
        self.system.cardinality()
    }
}

#[derive(Clone, Debug)]
pub enum Certificate {
    /// One invariant system per component.
    Systems(Vec<ComponentSystem>),
    EmptyCategory { zero_object: bool },
    NotConnected(ComponentPartition),
    /// Every morphism between `source` and `rest` goes from `source` to
    /// `rest`. Object indices are those of the full category.
    NotStronglyConnected {
        component: usize,
        source: Vec<usize>,
        rest: Vec<usize>,
    },
    NoInvariantSystem {
        component: usize,
        trace: Vec<SeedOutcome>,
    },
    /// Set only: invariant systems exist, none consists of singletons.
    NoSingletonSystem { cardinalities: Vec<usize> },
    CardinalityNotInvertible {
        component: usize,
        cardinalities: Vec<usize>,
        ring: RingSpec,
    },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Systems(_) => "invariant-system",
            Certificate::EmptyCategory { .. } => "empty-category",
            Certificate::NotConnected(_) => "not-connected",
            Certificate::NotStronglyConnected { .. } => "not-strongly-connected",
            Certificate::NoInvariantSystem { .. } => "no-invariant-system",
            Certificate::NoSingletonSystem { .. } => "no-singleton-system",
            Certificate::CardinalityNotInvertible { .. } => "cardinality-not-invertible",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub answer: bool,
    pub certificate: Certificate,
}

impl Verdict {
    fn yes(certificate: Certificate) -> Self {
        Verdict {
            answer: true,
            certificate,
        }
    }

    fn no(certificate: Certificate) -> Self {
        Verdict {
            answer: false,
            certificate,
        }
    }

    /// The invariant systems backing a positive verdict.
    pub fn systems(&self) -> &[ComponentSystem] {
        match &self.certificate {
            Certificate::Systems(s) => s,
            _ => &[],
        }
    }
}

fn require_valid(cat: &FinCategory) -> Result<(), CategoryError> {
    let report = cat.validate();
    if report.is_valid() {
        Ok(())
    } else {
        Err(CategoryError::Invalid(report))
    }
}

/// Result of analysing one connected component.
enum ComponentSearch {
    Split { source: Vec<usize>, rest: Vec<usize> },
    Searched(IsSearch),
}

fn search_component(sub: &FinCategory, embedding: &Embedding) -> ComponentSearch {
    let search = find_is(sub).expect("components are connected");
    match &search.connectivity {
        StrongConnectivity::Strong => ComponentSearch::Searched(search),
        StrongConnectivity::Split { source, rest } => ComponentSearch::Split {
            source: source.iter().map(|&o| embedding.objects[o]).collect(),
            rest: rest.iter().map(|&o| embedding.objects[o]).collect(),
        },
    }
}

pub fn decide_set(cat: &FinCategory) -> Result<Verdict, CategoryError> {
    require_valid(cat)?;
    if cat.is_empty() {
        return Ok(Verdict::no(Certificate::EmptyCategory { zero_object: false }));
    }
    let parts = cat.connected_components();
    if parts.count > 1 {
        return Ok(Verdict::no(Certificate::NotConnected(parts)));
    }
    let (sub, embedding) = cat.full_subcategory(&parts.members(0));
    let search = match search_component(&sub, &embedding) {
        ComponentSearch::Split { source, rest } => {
            return Ok(Verdict::no(Certificate::NotStronglyConnected {
                component: 0,
                source,
                rest,
            }))
        }
        ComponentSearch::Searched(s) => s,
    };
    if search.found.is_empty() {
        return Ok(Verdict::no(Certificate::NoInvariantSystem {
            component: 0,
            trace: search.trace,
        }));
    }
    match search.found.iter().find(|s| s.is_singleton()) {
        Some(system) => Ok(Verdict::yes(Certificate::Systems(vec![ComponentSystem {
            component: 0,
            system: system.clone(),
            subcategory: sub,
            embedding,
        }]))),
        None => Ok(Verdict::no(Certificate::NoSingletonSystem {
            cardinalities: search.cardinalities(),
        })),
    }
}

pub fn decide_mod(cat: &FinCategory, ring: RingSpec) -> Result<Verdict, CategoryError> {
    require_valid(cat)?;
    if cat.is_empty() {
        return Ok(Verdict::yes(Certificate::EmptyCategory { zero_object: true }));
    }
    let parts = cat.connected_components();
    let mut systems = Vec::with_capacity(parts.count);
    for component in 0..parts.count {
        let (sub, embedding) = cat.full_subcategory(&parts.members(component));
        let search = match search_component(&sub, &embedding) {
            ComponentSearch::Split { source, rest } => {
                return Ok(Verdict::no(Certificate::NotStronglyConnected {
                    component,
                    source,
                    rest,
                }))
            }
            ComponentSearch::Searched(s) => s,
        };
        if search.found.is_empty() {
            return Ok(Verdict::no(Certificate::NoInvariantSystem {
                component,
                trace: search.trace,
            }));
        }
        let best = search
            .found
            .iter()
            .filter(|s| ring.invertible(s.cardinality() as u64))
            .min_by_key(|s| s.cardinality());
        match best {
            Some(system) => systems.push(ComponentSystem {
                component,
                system: system.clone(),
                subcategory: sub,
                embedding,
            }),
            None => {
                return Ok(Verdict::no(Certificate::CardinalityNotInvertible {
                    component,
                    cardinalities: search.cardinalities(),
                    ring,
                }))
            }
        }
    }
    Ok(Verdict::yes(Certificate::Systems(systems)))
}

/// Whether a finite group of the given order has isomorphic limits and
/// colimits over modules on `ring`: the order must be a unit.
pub fn decide_group(order: u64, ring: RingSpec) -> bool {
    ring.invertible(order)
}
