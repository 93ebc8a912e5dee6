use serde::Serialize;
use stegabot_core::carriers::{float_extract, image_extract, pcm_extract};

use super::layout;
use crate::io::{self, render};
use crate::{CarrierKind, CliError, ExtractArgs, Format};

#[derive(Debug, Serialize)]
struct Extracted {
    message: String,
}

pub fn run(a: &ExtractArgs, fmt: Format) -> Result<String, CliError> {
    let lay = layout(&a.lsb)?;
    let message = match io::carrier_kind(&a.input, a.carrier)? {
        CarrierKind::Image => image_extract(&io::load_image(&a.input)?, lay),
        CarrierKind::Pcm => pcm_extract(io::load_wav(&a.input)?.clip(), lay),
        CarrierKind::Float => float_extract(&io::load_float(&a.input, a.lsb.quantum)?),
    }
    .map_err(CliError::extraction)?;
    Ok(match fmt {
        Format::Json => render(&Extracted { message }, fmt),
        Format::Text => format!("{message}\n"),
    })
}
