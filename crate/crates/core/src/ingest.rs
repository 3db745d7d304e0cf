//! Parsing of activity traces, follower edges and click tables.
//!
//! All three inputs are UTF-8, one record per line, TAB-separated:
//!
//! ```text
//! events   time<TAB>user<TAB>url<TAB>M
//!          time<TAB>user<TAB>url<TAB>RT<TAB>source
//! follows  followee<TAB>follower
//! clicks   url<TAB>count
//! ```
//!
//! Blank lines and lines starting with `#` are ignored, so files carrying a
//! manifest header can be read back directly.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{BufRead, BufReader, Read, Write};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("line {line}: {reason}")]
    UnparsableLine { line: usize, reason: String },
    #[error("line {line}: negative click count {count} for url {url}")]
    NegativeCount { line: usize, url: String, count: i64 },
    #[error("input contains no records")]
    EmptyInput,
    #[error("invalid event: {0}")]
    InvalidEvent(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// How malformed lines are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParseMode {
    /// Fail on the first malformed line.
    #[default]
    Strict,
    /// Skip malformed lines and tally them in the [`ParseReport`].
    Lenient,
}

/// Opaque user token.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UserId(pub String);

/// Opaque, pre-canonicalized URL token.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UrlId(pub String);

macro_rules! token_impls {
    ($t:ty) => {
        impl $t {
            pub fn as_str(&self) -> &str {
                &self.0
            }
        }
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
        impl From<&str> for $t {
            fn from(s: &str) -> Self {
                Self(s.to_owned())
            }
        }
        impl From<String> for $t {
            fn from(s: String) -> Self {
                Self(s)
            }
        }
    };
}
token_impls!(UserId);
token_impls!(UrlId);

/// Whether an event is an original URL mention or a retweet crediting `source`.
///
/// The derived ordering (`Mention` before `Retweet`, retweets by source) is
/// the final tie-break key for events with equal time, user and url.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EventKind {
    Mention,
    Retweet { source: UserId },
}

/// One timestamped URL mention.
///
/// Field order matters: the derived `Ord` sorts by `(time, user, url, kind)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TweetEvent {
    pub time: i64,
    pub user: UserId,
    pub url: UrlId,
    pub kind: EventKind,
}

impl TweetEvent {
    pub fn mention(time: i64, user: impl Into<UserId>, url: impl Into<UrlId>) -> Self {
        Self { time, user: user.into(), url: url.into(), kind: EventKind::Mention }
    }

    pub fn retweet(
        time: i64,
        user: impl Into<UserId>,
        url: impl Into<UrlId>,
        source: impl Into<UserId>,
    ) -> Self {
        Self {
            time,
            user: user.into(),
            url: url.into(),
            kind: EventKind::Retweet { source: source.into() },
        }
    }

    /// The credited user when this is a retweet.
    pub fn source(&self) -> Option<&UserId> {
        match &self.kind {
            EventKind::Mention => None,
            EventKind::Retweet { source } => Some(source),
        }
    }

    pub fn is_retweet(&self) -> bool {
        matches!(self.kind, EventKind::Retweet { .. })
    }

    fn validate(&self) -> Result<(), String> {
        if self.user.0.is_empty() {
            return Err("empty user".into());
        }
        if self.url.0.is_empty() {
            return Err("empty url".into());
        }
        if let EventKind::Retweet { source } = &self.kind {
            if source.0.is_empty() {
                return Err("empty retweet source".into());
            }
            if *source == self.user {
                return Err(format!("user {} retweets themself", self.user));
            }
        }
        Ok(())
    }

    fn parse_line(line: &str) -> Result<Self, String> {
        let fields: Vec<&str> = line.split('\t').collect();
        let event = match fields.as_slice() {
            [time, user, url, "M"] => Self::mention(parse_time(time)?, *user, *url),
            [time, user, url, "RT", source] => {
                Self::retweet(parse_time(time)?, *user, *url, *source)
            }
            _ => return Err(format!("expected 4 or 5 TAB-separated fields, got {line:?}")),
        };
        event.validate()?;
        Ok(event)
    }

    /// Serializes the event in the events-file line format (without newline).
    pub fn to_line(&self) -> String {
        match &self.kind {
            EventKind::Mention => format!("{}\t{}\t{}\tM", self.time, self.user, self.url),
            EventKind::Retweet { source } => {
                format!("{}\t{}\t{}\tRT\t{}", self.time, self.user, self.url, source)
            }
        }
    }
}

fn parse_time(s: &str) -> Result<i64, String> {
    s.parse::<i64>().map_err(|_| format!("bad timestamp {s:?}"))
}

/// Events sorted by `(time, user, url, kind)` with a per-user position index.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ActivityLog {
    events: Vec<TweetEvent>,
    by_user: BTreeMap<UserId, Vec<usize>>,
}

impl ActivityLog {
    /// Validates and sorts `events`.
    pub fn from_events(mut events: Vec<TweetEvent>) -> Result<Self, IngestError> {
        for e in &events {
            e.validate().map_err(IngestError::InvalidEvent)?;
        }
        events.sort();
        let mut by_user: BTreeMap<UserId, Vec<usize>> = BTreeMap::new();
        for (pos, e) in events.iter().enumerate() {
            by_user.entry(e.user.clone()).or_default().push(pos);
        }
        Ok(Self { events, by_user })
    }

    pub fn events(&self) -> &[TweetEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Users with at least one event, ascending.
    pub fn users(&self) -> impl Iterator<Item = &UserId> {
        self.by_user.keys()
    }

    /// Events authored by `user`, in log order.
    pub fn events_of<'a>(&'a self, user: &UserId) -> impl Iterator<Item = &'a TweetEvent> + 'a {
        self.by_user
            .get(user)
            .map(|v| v.as_slice())
            .unwrap_or(&[])
            .iter()
            .map(move |&p| &self.events[p])
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for e in &self.events {
            writeln!(out, "{}", e.to_line())?;
        }
        Ok(())
    }
}

/// Set of `(followee, follower)` pairs: the second user follows the first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FollowEdgeList {
    edges: BTreeSet<(UserId, UserId)>,
}

impl FollowEdgeList {
    /// Builds the edge set, collapsing duplicates. Self-follows are rejected.
    pub fn from_pairs<I>(pairs: I) -> Result<Self, IngestError>
    where
        I: IntoIterator<Item = (UserId, UserId)>,
    {
        let mut edges = BTreeSet::new();
        for (followee, follower) in pairs {
            if followee == follower {
                return Err(IngestError::InvalidEvent(format!("{followee} follows themself")));
            }
            edges.insert((followee, follower));
        }
        Ok(Self { edges })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// True when `follower` follows `followee`.
    pub fn contains(&self, followee: &UserId, follower: &UserId) -> bool {
        // BTreeSet<(A, B)> can't be probed with a borrowed pair.
        self.edges.contains(&(followee.clone(), follower.clone()))
    }

    /// `(followee, follower)` pairs in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = (&UserId, &UserId)> {
        self.edges.iter().map(|(a, b)| (a, b))
    }

    /// followee -> ascending followers.
    pub fn followers_index(&self) -> BTreeMap<&UserId, Vec<&UserId>> {
        let mut idx: BTreeMap<&UserId, Vec<&UserId>> = BTreeMap::new();
        for (followee, follower) in &self.edges {
            idx.entry(followee).or_default().push(follower);
        }
        idx
    }

    /// follower -> ascending followees.
    pub fn followees_index(&self) -> BTreeMap<&UserId, Vec<&UserId>> {
        let mut idx: BTreeMap<&UserId, Vec<&UserId>> = BTreeMap::new();
        for (followee, follower) in &self.edges {
            idx.entry(follower).or_default().push(followee);
        }
        for v in idx.values_mut() {
            v.sort();
        }
        idx
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (followee, follower) in &self.edges {
            writeln!(out, "{followee}\t{follower}")?;
        }
        Ok(())
    }
}

/// URL -> cumulative click total.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClickTable {
    pub clicks: BTreeMap<UrlId, u64>,
}

impl ClickTable {
    pub fn get(&self, url: &UrlId) -> Option<u64> {
        self.clicks.get(url).copied()
    }

    pub fn len(&self) -> usize {
        self.clicks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clicks.is_empty()
    }
}

/// Tally of what a parse consumed and skipped.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseReport {
    pub records: usize,
    pub skipped: usize,
    /// First skipped line number (1-based) and reason, for diagnostics.
    pub first_skipped: Option<(usize, String)>,
}

impl ParseReport {
    fn skip(&mut self, line: usize, reason: String) {
        self.skipped += 1;
        if self.first_skipped.is_none() {
            self.first_skipped = Some((line, reason));
        }
    }
}

/// Yields `(line number, content)` for every non-blank, non-comment line.
fn records<R: Read>(input: R) -> impl Iterator<Item = Result<(usize, String), IngestError>> {
    BufReader::new(input)
        .split(b'\n')
        .enumerate()
        .filter_map(|(i, raw)| {
            let lineno = i + 1;
            let raw = match raw {
                Ok(raw) => raw,
                Err(e) => return Some(Err(IngestError::Io(e))),
            };
            let line = match String::from_utf8(raw) {
                Ok(s) => s,
                Err(_) => {
                    return Some(Err(IngestError::UnparsableLine {
                        line: lineno,
                        reason: "invalid UTF-8".into(),
                    }))
                }
            };
            let line = line.strip_suffix('\r').unwrap_or(&line);
            if line.trim().is_empty() || line.starts_with('#') {
                None
            } else {
                Some(Ok((lineno, line.to_owned())))
            }
        })
}

/// Runs `parse` over every record line, applying `mode` to failures.
fn parse_records<R, T, F>(
    input: R,
    mode: ParseMode,
    mut parse: F,
) -> Result<(Vec<T>, ParseReport), IngestError>
where
    R: Read,
    F: FnMut(usize, &str) -> Result<T, IngestError>,
{
    let mut out = Vec::new();
    let mut report = ParseReport::default();
    for rec in records(input) {
        let (lineno, line) = match rec {
            Ok(r) => r,
            Err(IngestError::UnparsableLine { line, reason }) if mode == ParseMode::Lenient => {
                report.skip(line, reason);
                continue;
            }
            Err(e) => return Err(e),
        };
        match parse(lineno, &line) {
            Ok(v) => {
                report.records += 1;
                out.push(v);
            }
            Err(e) if mode == ParseMode::Lenient => report.skip(lineno, e.to_string()),
            Err(e) => return Err(e),
        }
    }
    Ok((out, report))
}

/// Parses an events file into a time-sorted [`ActivityLog`].
pub fn parse_events<R: Read>(
    input: R,
    mode: ParseMode,
) -> Result<(ActivityLog, ParseReport), IngestError> {
    let (events, report) = parse_records(input, mode, |line, s| {
        TweetEvent::parse_line(s).map_err(|reason| IngestError::UnparsableLine { line, reason })
    })?;
    if events.is_empty() {
        return Err(IngestError::EmptyInput);
    }
    Ok((ActivityLog::from_events(events)?, report))
}

/// Parses a follows file (`followee<TAB>follower`), collapsing duplicates.
pub fn parse_follows<R: Read>(
    input: R,
    mode: ParseMode,
) -> Result<(FollowEdgeList, ParseReport), IngestError> {
    let (pairs, report) = parse_records(input, mode, |line, s| {
        let bad = |reason: String| IngestError::UnparsableLine { line, reason };
        match s.split('\t').collect::<Vec<_>>().as_slice() {
            [a, b] if a.is_empty() || b.is_empty() => Err(bad("empty user".into())),
            [a, b] if a == b => Err(bad(format!("{a} follows themself"))),
            [a, b] => Ok((UserId::from(*a), UserId::from(*b))),
            _ => Err(bad(format!("expected followee<TAB>follower, got {s:?}"))),
        }
    })?;
    if pairs.is_empty() {
        return Err(IngestError::EmptyInput);
    }
    Ok((FollowEdgeList::from_pairs(pairs)?, report))
}

/// Parses a clicks file (`url<TAB>count`). Duplicate URLs keep the maximum.
pub fn parse_clicks<R: Read>(
    input: R,
    mode: ParseMode,
) -> Result<(ClickTable, ParseReport), IngestError> {
    let (rows, report) = parse_records(input, mode, |line, s| {
        let bad = |reason: String| IngestError::UnparsableLine { line, reason };
        match s.split('\t').collect::<Vec<_>>().as_slice() {
            ["", _] => Err(bad("empty url".into())),
            [url, count] => {
                let count: i64 =
                    count.parse().map_err(|_| bad(format!("bad click count {count:?}")))?;
                if count < 0 {
                    return Err(IngestError::NegativeCount { line, url: url.to_string(), count });
                }
                Ok((UrlId::from(*url), count as u64))
            }
            _ => Err(bad(format!("expected url<TAB>count, got {s:?}"))),
        }
    })?;
    let mut table = ClickTable::default();
    for (url, count) in rows {
        let slot = table.clicks.entry(url).or_insert(0);
        *slot = (*slot).max(count);
    }
    Ok((table, report))
}

/// Distinct URLs mentioned per user. Retweets count as mentions by the retweeter.
pub fn url_counts(log: &ActivityLog) -> BTreeMap<UserId, usize> {
    distinct_urls(log).into_iter().map(|(u, s)| (u.clone(), s.len())).collect()
}

/// user -> set of distinct URLs they mentioned (any event kind).
pub(crate) fn distinct_urls(log: &ActivityLog) -> BTreeMap<&UserId, BTreeSet<&UrlId>> {
    let mut out: BTreeMap<&UserId, BTreeSet<&UrlId>> = BTreeMap::new();
    for e in log.events() {
        out.entry(&e.user).or_default().insert(&e.url);
    }
    out
}
