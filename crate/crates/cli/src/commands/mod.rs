pub mod analyze;
pub mod demo_study;
pub mod embed;
pub mod evaluate;
pub mod extract;
pub mod montecarlo;
pub mod observe;
pub mod plan;
pub mod simulate;

use stegabot_core::carriers::LsbLayout;

use crate::{CliError, LsbArgs};

pub(crate) fn layout(a: &LsbArgs) -> Result<LsbLayout, CliError> {
    LsbLayout::new(a.offset, a.stride).map_err(|e| CliError::Usage(e.to_string()))
}
