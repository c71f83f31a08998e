//! Unit-system presets.
//!
//! Geometric units (c = 1) make the 1/c² couplings O(1) at desk scale. SI
//! values are provided for completeness; at SI scale g·b/c² ~ 1e-16 and the
//! effects drown in round-off.

/// Speed of light in m/s.
pub const SPEED_OF_LIGHT_SI: f64 = 299_792_458.0;

/// Standard gravity in m/s².
pub const STANDARD_GRAVITY_SI: f64 = 9.806_65;

/// Reduced Planck constant in J·s.
pub const HBAR_SI: f64 = 1.054_571_817e-34;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnitSystem {
    #[default]
    Geometric,
    Si,
}

impl UnitSystem {
    pub fn speed_of_light(self) -> f64 {
        match self {
            UnitSystem::Geometric => 1.0,
            UnitSystem::Si => SPEED_OF_LIGHT_SI,
        }
    }

    pub fn hbar(self) -> f64 {
        match self {
            UnitSystem::Geometric => 1.0,
            UnitSystem::Si => HBAR_SI,
        }
    }
}

impl std::str::FromStr for UnitSystem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "geometric" => Ok(UnitSystem::Geometric),
            "si" => Ok(UnitSystem::Si),
            other => Err(format!("unknown unit system `{other}` (expected geometric or SI)")),
        }
    }
}
