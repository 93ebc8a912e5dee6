//! Message representation shared by all carriers: framing, Morse and salt.

mod frame;
mod morse;
mod salt;

pub use frame::{
    bits_to_bytes, bytes_to_bits, frame_message, unframe_message, unframe_message_within, xor_fold, BitFrame,
    FrameError, DEFAULT_SCAN_WINDOW, MAGIC, MAX_PAYLOAD, OVERHEAD_BYTES,
};
pub use morse::{alphabet, morse_to_text, normalize_text, text_to_morse, MorseError, MorseSequence, MorseSymbol};
pub use salt::{add_salt, salted_len};
