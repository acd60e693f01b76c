//! Cooperative cancellation, polled by the engines between steps.

use core::sync::atomic::{AtomicBool, Ordering};

pub trait Interrupt {
    fn interrupted(&self) -> bool;
}

/// Never interrupts.
#[derive(Clone, Copy, Debug, Default)]
pub struct Never;

impl Interrupt for Never {
    fn interrupted(&self) -> bool {
        false
    }
}

impl Interrupt for AtomicBool {
    fn interrupted(&self) -> bool {
        self.load(Ordering::Relaxed)
    }
}

/// Adapts a closure, e.g. a deadline check supplied by the host.
pub struct PollFn<F>(pub F);

impl<F: Fn() -> bool> Interrupt for PollFn<F> {
    fn interrupted(&self) -> bool {
        (self.0)()
    }
}

impl<T: Interrupt + ?Sized> Interrupt for &T {
    fn interrupted(&self) -> bool {
        (**self).interrupted()
    }
}
