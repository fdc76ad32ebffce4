use crate::error::{Error, Result};

/// Analytic bump shape `f(r, z̃; w)`, even in `r`.
pub trait Profile: Send + Sync {
    fn name(&self) -> &'static str;
    fn eval(&self, r: f64, z: f64, width: f64) -> f64;
}

struct Gaussian;

impl Profile for Gaussian {
    fn name(&self) -> &'static str {
        "gaussian"
    }

    fn eval(&self, r: f64, z: f64, width: f64) -> f64 {
        (-(r * r + z * z) / (width * width)).exp()
    }
}

/// Gaussian weighted by `r²/w²`: vanishes on the axis, peaks on a ring.
struct Ring;

impl Profile for Ring {
    fn name(&self) -> &'static str {
        "ring"
    }

    fn eval(&self, r: f64, z: f64, width: f64) -> f64 {
        let s = r * r / (width * width);
        s * (-s - z * z / (width * width)).exp()
    }
}

struct Zero;

impl Profile for Zero {
    fn name(&self) -> &'static str {
        "zero"
    }

    fn eval(&self, _r: f64, _z: f64, _width: f64) -> f64 {
        0.0
    }
}

/// Named initial-data shapes.
pub struct ProfileRegistry {
    entries: Vec<Box<dyn Profile>>,
}

impl Default for ProfileRegistry {
    fn default() -> Self {
        let mut reg = ProfileRegistry::empty();
        for p in [Box::new(Gaussian) as Box<dyn Profile>, Box::new(Ring), Box::new(Zero)] {
            reg.register(p).expect("builtin names are distinct");
        }
        reg
    }
}

impl ProfileRegistry {
    pub fn empty() -> Self {
        ProfileRegistry { entries: Vec::new() }
    }

    pub fn register(&mut self, profile: Box<dyn Profile>) -> Result<()> {
        if self.entries.iter().any(|p| p.name() == profile.name()) {
            return Err(Error::InvalidArgument(format!(
                "profile '{}' registered twice",
                profile.name()
            )));
        }
        self.entries.push(profile);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&dyn Profile> {
        self.entries
            .iter()
            .find(|p| p.name() == name)
            .map(|p| p.as_ref())
            .ok_or_else(|| Error::UnknownName {
                kind: "profile",
                name: name.to_string(),
                known: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|p| p.name()).collect()
    }
}
