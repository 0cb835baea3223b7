use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::scalar::Scalar;
use crate::space::Element;

/// Both sides of an identity or inequality and whether it held.
#[derive(Debug, Clone, PartialEq)]
pub struct Check<S> {
    pub lhs: Element<S>,
    pub rhs: Element<S>,
    pub holds: bool,
}

impl<S: Scalar> Check<S> {
    pub(crate) fn equality(lhs: Element<S>, rhs: Element<S>) -> crate::Result<Self> {
        let holds = lhs.approx_eq(&rhs)?;
        Ok(Self { lhs, rhs, holds })
    }

    pub(crate) fn inequality(lhs: Element<S>, rhs: Element<S>) -> crate::Result<Self> {
        let holds = lhs.approx_le(&rhs)?;
        Ok(Self { lhs, rhs, holds })
    }
}

impl<S: Scalar> Serialize for Check<S> {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> Result<Z::Ok, Z::Error> {
        let mut st = serializer.serialize_struct("Check", 3)?;
        st.serialize_field("lhs", &crate::io::coords_repr(&self.lhs))?;
        st.serialize_field("rhs", &crate::io::coords_repr(&self.rhs))?;
        st.serialize_field("holds", &self.holds)?;
        st.end()
    }
}
