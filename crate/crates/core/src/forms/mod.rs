//! Differential forms on loop spaces: kernel representation, the canonical
//! 2-form of the path group, the iterated-integral form `μ`, Chern–Simons
//! transgression, the Carey–Murray form and Nualart–Pardoux regularity.

pub mod bundle_forms;
pub mod canonical;
pub mod derivative;
pub mod kernel;
pub mod np;
#[cfg(test)]
pub(crate) mod testing;

pub use bundle_forms::{
    carey_murray, chern_simons, fiber_canonical, field_bracket, mu_form, p1_density, transgression_tau_nu, LoopForm,
    LoopTangent, TotalField,
};
pub use canonical::{canonical_kernel, canonical_two_form, cocycle_residual, derivative_slots, C_G};
pub use derivative::{
    closedness_defect, covariant_derivative, directional_derivative, exterior_derivative, flow_loop, DerivativeContext, KernelFamily,
};
pub use kernel::{evaluate, evaluate_pullback_base, pullback_base, slot_mean, wedge, HalfLimit, KernelForm, Slot, SlotField};
pub use np::{
    connection_independence_check, contraction_kernel, holder_slope, horizontal_slots, np_estimate, tangent_frame,
    IndependenceRatio, NpConstants, NpOptions,
};
