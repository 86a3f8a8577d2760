// SPDX-License-Identifier: Apache-2.0

//! Class groups of imaginary quadratic fields, their scalar and
//! vector-valued theta functions, the Weil representation with the
//! scalar-to-vector lift, and Petersson inner products computed both by
//! quadrature and from CM values of the Dedekind eta function.

#![allow(unstable_name_collisions)]

pub mod arith;
pub mod classgroup;
pub mod cyclo;
pub mod error;
pub mod ideallat;
pub mod numerics;
pub mod petersson;
pub mod scalartheta;
pub mod verify;
pub mod vvtheta;
pub mod weilrep;

pub use error::{Error, Result};
