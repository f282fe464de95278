//! The fixed country registry: the 27 Member States plus the EU27 aggregate.
//!
//! Registry order is the Eurostat protocol order used by every table the
//! engine emits. `MemberState` derives `Ord` from that order, so a
//! [`CountryMap`] iterates in registry order without further sorting.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

/// Per-Member-State values, iterated in registry order.
pub type CountryMap = BTreeMap<MemberState, f64>;

macro_rules! member_states {
    ($($variant:ident => $code:literal, $name:literal;)*) => {
        /// One of the 27 EU Member States.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum MemberState {
            $($variant,)*
        }

        impl MemberState {
            /// All Member States in registry order.
            pub const ALL: [MemberState; 27] = [$(MemberState::$variant,)*];

            pub fn code(self) -> &'static str {
                match self {
                    $(MemberState::$variant => $code,)*
                }
            }

            pub fn name(self) -> &'static str {
                match self {
                    $(MemberState::$variant => $name,)*
                }
            }

            /// Parses an ISO-like country code. `GR` is accepted for Greece.
            pub fn from_code(code: &str) -> Option<MemberState> {
                match code.trim() {
                    $($code => Some(MemberState::$variant),)*
                    "GR" => Some(MemberState::Greece),
                    _ => None,
                }
            }
        }
    };
}

member_states! {
    Belgium => "BE", "Belgium";
    Bulgaria => "BG", "Bulgaria";
    Czechia => "CZ", "Czechia";
    Denmark => "DK", "Denmark";
    Germany => "DE", "Germany";
    Estonia => "EE", "Estonia";
    Ireland => "IE", "Ireland";
    Greece => "EL", "Greece";
    Spain => "ES", "Spain";
    France => "FR", "France";
    Croatia => "HR", "Croatia";
    Italy => "IT", "Italy";
    Cyprus => "CY", "Cyprus";
    Latvia => "LV", "Latvia";
    Lithuania => "LT", "Lithuania";
    Luxembourg => "LU", "Luxembourg";
    Hungary => "HU", "Hungary";
    Malta => "MT", "Malta";
    Netherlands => "NL", "Netherlands";
    Austria => "AT", "Austria";
    Poland => "PL", "Poland";
    Portugal => "PT", "Portugal";
    Romania => "RO", "Romania";
    Slovenia => "SI", "Slovenia";
    Slovakia => "SK", "Slovakia";
    Finland => "FI", "Finland";
    Sweden => "SE", "Sweden";
}

impl MemberState {
    /// Zero-based position in the registry.
    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for MemberState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl Serialize for MemberState {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.code())
    }
}

/// Code of the EU27 aggregate row.
pub const EU27_CODE: &str = "EU27";

/// A registry entry: either the aggregate or one Member State.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Region {
    Eu27,
    Member(MemberState),
}

impl Region {
    /// The aggregate followed by every Member State, in registry order.
    pub fn all() -> impl Iterator<Item = Region> {
        std::iter::once(Region::Eu27).chain(MemberState::ALL.iter().copied().map(Region::Member))
    }

    pub fn code(self) -> &'static str {
        match self {
            Region::Eu27 => EU27_CODE,
            Region::Member(m) => m.code(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Region::Eu27 => "European Union - 27",
            Region::Member(m) => m.name(),
        }
    }

    pub fn member(self) -> Option<MemberState> {
        match self {
            Region::Eu27 => None,
            Region::Member(m) => Some(m),
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl Serialize for Region {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown country code `{0}`")]
pub struct UnknownCountry(pub String);

impl FromStr for Region {
    type Err = UnknownCountry;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case(EU27_CODE) {
            return Ok(Region::Eu27);
        }
        MemberState::from_code(s)
            .map(Region::Member)
            .ok_or_else(|| UnknownCountry(s.to_string()))
    }
}

impl FromStr for MemberState {
    type Err = UnknownCountry;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MemberState::from_code(s).ok_or_else(|| UnknownCountry(s.trim().to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn registry_has_27_unique_codes() {
        let codes: HashSet<_> = MemberState::ALL.iter().map(|m| m.code()).collect();
        assert_eq!(codes.len(), 27);
        assert!(!codes.contains(EU27_CODE));
        assert_eq!(Region::all().count(), 28);
    }

    #[test]
    fn order_follows_registry() {
        for (i, m) in MemberState::ALL.iter().enumerate() {
            assert_eq!(m.index(), i);
            assert_eq!(MemberState::from_code(m.code()), Some(*m));
        }
        assert!(MemberState::Belgium < MemberState::Sweden);
    }

    #[test]
    fn parses_aliases_and_aggregate() {
        assert_eq!("GR".parse::<Region>(), Ok(Region::Member(MemberState::Greece)));
        assert_eq!(" eu27 ".parse::<Region>(), Ok(Region::Eu27));
        assert!("XX".parse::<Region>().is_err());
    }
}
