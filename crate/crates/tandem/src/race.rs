//! Running two engines against each other with a shared stop flag.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc;
use std::thread;
use std::time::Instant;

use tandem_core::interrupt::Interrupt;

/// Raised by the stop flag or by the deadline.
#[derive(Debug)]
pub struct Stop<'a> {
    flag: &'a AtomicBool,
    deadline: Option<Instant>,
}

impl<'a> Stop<'a> {
    pub fn new(flag: &'a AtomicBool, deadline: Option<Instant>) -> Self {
        Stop { flag, deadline }
    }

    pub fn timed_out(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

impl Interrupt for Stop<'_> {
    fn interrupted(&self) -> bool {
        self.flag.load(Ordering::Relaxed) || self.timed_out()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Me,
    Sat,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Me => "me",
            Side::Sat => "sat",
        }
    }
}

/// What an engine returns.
#[derive(Clone, Debug, PartialEq)]
pub enum Attempt<T> {
    Proved { proof: T, work: u64 },
    Failed { status: String, interrupted: bool },
}

/// How an engine ended, faults included.
#[derive(Clone, Debug, PartialEq)]
pub enum Finish<T> {
    Proved { proof: T, work: u64 },
    Failed { status: String, interrupted: bool },
    Faulted(String),
}

impl<T> From<Attempt<T>> for Finish<T> {
    fn from(a: Attempt<T>) -> Self {
        match a {
            Attempt::Proved { proof, work } => Finish::Proved { proof, work },
            Attempt::Failed { status, interrupted } => Finish::Failed { status, interrupted },
        }
    }
}

impl<T> Finish<T> {
    pub fn is_proved(&self) -> bool {
        matches!(self, Finish::Proved { .. })
    }

    fn work(&self) -> Option<u64> {
        match self {
            Finish::Proved { work, .. } => Some(*work),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Finish::Proved { work, .. } => format!("proved after {work} work units"),
            Finish::Failed { status, .. } => status.clone(),
            Finish::Faulted(msg) => format!("fault: {msg}"),
        }
    }
}

#[derive(Debug)]
pub struct RaceResult<A, B> {
    pub winner: Option<Side>,
    pub me: Finish<A>,
    pub sat: Finish<B>,
    /// Stop signals and their acknowledgments, in order.
    pub log: Vec<String>,
}

fn guarded<T>(f: impl FnOnce() -> Attempt<T>) -> Finish<T> {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(a) => a.into(),
        Err(e) => {
            let msg = e
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| e.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            Finish::Faulted(msg)
        }
    }
}

fn lost<T>() -> Finish<T> {
    Finish::Faulted("engine thread ended without a result".to_string())
}

enum Msg<A, B> {
    Me(Finish<A>),
    Sat(Finish<B>),
}

/// Runs both engines on their own threads. The first proof raises the stop
/// flag and the loser's return is logged as its acknowledgment; a fault in
/// one engine leaves the other running.
pub fn race<A: Send, B: Send>(
    me: impl FnOnce(&Stop<'_>) -> Attempt<A> + Send,
    sat: impl FnOnce(&Stop<'_>) -> Attempt<B> + Send,
    deadline: Option<Instant>,
) -> RaceResult<A, B> {
    let flag = AtomicBool::new(false);
    let (tx, rx) = mpsc::channel::<Msg<A, B>>();
    thread::scope(|s| {
        let tx_me = tx.clone();
        let flag_ref = &flag;
        s.spawn(move || {
            let stop = Stop::new(flag_ref, deadline);
            let _ = tx_me.send(Msg::Me(guarded(|| me(&stop))));
        });
        s.spawn(move || {
            let stop = Stop::new(flag_ref, deadline);
            let _ = tx.send(Msg::Sat(guarded(|| sat(&stop))));
        });
        let mut me_done: Option<Finish<A>> = None;
        let mut sat_done: Option<Finish<B>> = None;
        let mut winner = None;
        let mut log = Vec::new();
        while me_done.is_none() || sat_done.is_none() {
            let msg = match deadline {
                Some(d) if !flag.load(Ordering::Relaxed) => {
                    match rx.recv_timeout(d.saturating_duration_since(Instant::now())) {
                        Ok(m) => m,
                        Err(mpsc::RecvTimeoutError::Timeout) => {
                            flag.store(true, Ordering::Relaxed);
                            log.push("deadline: stop signalled to both engines".to_string());
                            continue;
                        }
                        Err(mpsc::RecvTimeoutError::Disconnected) => break,
                    }
                }
                _ => match rx.recv() {
                    Ok(m) => m,
                    Err(_) => break,
                },
            };
            let (side, proved, what) = match msg {
                Msg::Me(f) => {
                    let r = (Side::Me, f.is_proved(), f.describe());
                    me_done = Some(f);
                    r
                }
                Msg::Sat(f) => {
                    let r = (Side::Sat, f.is_proved(), f.describe());
                    sat_done = Some(f);
                    r
                }
            };
            if flag.load(Ordering::Relaxed) {
                log.push(format!("{}: acknowledged stop ({what})", side.as_str()));
            } else if proved && winner.is_none() {
                winner = Some(side);
                flag.store(true, Ordering::Relaxed);
                let other = if side == Side::Me { Side::Sat } else { Side::Me };
                log.push(format!("{}: proof found, stop signalled to {}", side.as_str(), other.as_str()));
            }
        }
        RaceResult { winner, me: me_done.unwrap_or_else(lost), sat: sat_done.unwrap_or_else(lost), log }
    })
}

/// Runs the engines one after the other without stopping either. Both
/// proving, the one with fewer work units wins, ME on ties.
pub fn race_sequential<A, B>(
    me: impl FnOnce(&Stop<'_>) -> Attempt<A>,
    sat: impl FnOnce(&Stop<'_>) -> Attempt<B>,
    deadline: Option<Instant>,
) -> RaceResult<A, B> {
    let flag = AtomicBool::new(false);
    let stop = Stop::new(&flag, deadline);
    let me = guarded(|| me(&stop));
    let sat = guarded(|| sat(&stop));
    let winner = match (me.work(), sat.work()) {
        (Some(a), Some(b)) => Some(if b < a { Side::Sat } else { Side::Me }),
        (Some(_), None) => Some(Side::Me),
        (None, Some(_)) => Some(Side::Sat),
        (None, None) => None,
    };
    RaceResult { winner, me, sat, log: Vec::new() }
}
