//! Trivial SU(2) bundles `Q = M × SU(2)` over the spheres with a global
//! connection form, and the induced geometry on the loop space `L_e(Q)`.
//!
//! Conventions: horizontal lifts `(γ_s, T_s)` solve `dT = −A(dγ) T`, so the
//! curvature is `F(X, Y) = ∂_X A(Y) − ∂_Y A(X) + [A X, A Y]`. A loop in `Q` is
//! written `q_s = T_s g_s` with `g_0 = e`, `g_1 = T_1⁻¹`.

pub mod bracket;
pub mod connection;
pub mod section;
pub mod total;
pub mod transport;


pub use bracket::{bracket_argument, bracket_horizontal, bracket_vertical, BracketDecomposition};
pub use connection::{
    BundleSpec, ConnectionForm, FlatConnection, LinearConnection, MaurerCartanConnection, U1Connection,
};
pub use section::{infinity_connection_form, local_section, InfinityConnection};
pub use total::{
    divergence_horizontal, divergence_vertical, horizontal_field, horizontal_field_from_values, mixed_norm_squared,
    sample_total, vertical_field, BundleLoop, HorizontalField, TotalPoint, TotalTangent, VerticalField,
};
pub use transport::{bundle_transport, holonomy_derivative, holonomy_derivative_path};
