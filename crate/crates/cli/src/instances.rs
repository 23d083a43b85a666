//! Named small instances: lattices, monoids, bands and discrete spaces.

use anyhow::{bail, Context, Result};

use weaklaw::finrel::{FinFn, FinSet};
use weaklaw::monadkit::{AlgebraSpec, MonadRef};
use weaklaw::showcase::{discrete_beta_structure, lattice_t_algebra, CommMonoid, FinBand, FinLattice, FinTopSpace};
use weaklaw::zoo::MonadName;

/// An instance named on the command line, e.g. `chain(3)` or `free(2)`.
#[derive(Clone, Debug)]
pub enum Instance {
    Lattice(FinLattice),
    Monoid(CommMonoid),
    Band(FinBand),
    Discrete(FinSet),
}

fn arg(name: &MonadName) -> Result<usize> {
    name.degree.with_context(|| format!("{} needs a size, as in {}(2)", name.monad, name.monad))
}

pub fn lattice(spec: &str) -> Result<FinLattice> {
    let n = MonadName::parse(spec)?;
    Ok(match n.monad.as_str() {
        "chain" => FinLattice::chain(arg(&n)?),
        "m3" => FinLattice::m3(),
        "n5" => FinLattice::n5(),
        "diamond" => FinLattice::diamond(),
        "powerset" => FinLattice::powerset(&FinSet::standard(arg(&n)?))?,
        "reverse-powerset" => FinLattice::reverse_powerset(&FinSet::standard(arg(&n)?))?,
        other => bail!(weaklaw::Error::Unknown(format!("lattice {other:?}"))),
    })
}

/// `all(n)` for every lattice of size `n`, otherwise a single named one.
pub fn lattices(spec: &str) -> Result<Vec<FinLattice>> {
    let n = MonadName::parse(spec)?;
    if n.monad == "all" {
        return Ok(FinLattice::all(arg(&n)?));
    }
    Ok(vec![lattice(spec)?])
}

pub fn parse(kind: &str, spec: &str) -> Result<Instance> {
    let n = MonadName::parse(spec)?;
    Ok(match kind {
        "lattice" => Instance::Lattice(lattice(spec)?),
        "monoid" => match n.monad.as_str() {
            "cyclic" => Instance::Monoid(CommMonoid::cyclic(arg(&n)?)),
            other => bail!(weaklaw::Error::Unknown(format!("monoid {other:?}"))),
        },
        "band" => match n.monad.as_str() {
            "free" => Instance::Band(FinBand::free(arg(&n)?)?),
            "chain" => Instance::Band(FinBand::from_semilattice(&FinLattice::chain(arg(&n)?))?),
            other => bail!(weaklaw::Error::Unknown(format!("band {other:?}"))),
        },
        "discrete" => Instance::Discrete(FinSet::standard(spec.trim().parse().context("discrete takes a size")?)),
        other => bail!(weaklaw::Error::Unknown(format!("instance kind {other:?}"))),
    })
}

/// The algebra an instance carries for `m`.
pub fn algebra(m: &MonadRef, inst: &Instance) -> Result<AlgebraSpec> {
    Ok(match inst {
        Instance::Lattice(l) => lattice_t_algebra(m, l)?,
        Instance::Discrete(x) => discrete_beta_structure(&FinTopSpace::discrete(x))?,
        Instance::Monoid(c) => {
            let d = m
                .truncation()
                .filter(|_| m.name().starts_with("multiset"))
                .context("a monoid carries an algebra for the multiset monad")?;
            AlgebraSpec::new(m, c.carrier(), c.multiset_algebra(d)?.action)
        }
        Instance::Band(b) => {
            if !m.name().starts_with("normal-band") {
                bail!(weaklaw::Error::InvalidStructure("a band carries an algebra for the normal-band monad".into()));
            }
            let tx = m.obj(b.carrier())?;
            AlgebraSpec::from_fn(m, &FinFn::new(&tx, b.carrier(), |w| b.evaluate(w))?)?
        }
    })
}
