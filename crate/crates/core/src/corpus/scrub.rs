use regex::{Regex, RegexBuilder};

/// Replacement for every portal mention.
pub const PORTAL_TOKEN: &str = "[PORTAL]";

/// What a scrub pass changed, kept for auditing.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScrubLog {
    pub removed_bylines: Vec<String>,
    pub replaced_mentions: Vec<String>,
}

impl ScrubLog {
    pub fn is_empty(&self) -> bool {
        self.removed_bylines.is_empty() && self.replaced_mentions.is_empty()
    }
}

/// Compiled alias patterns for one portal.
#[derive(Clone, Debug)]
pub struct PortalScrubber {
    byline: Regex,
    mention: Regex,
}

fn alias_alternation(aliases: &[String]) -> String {
    let mut sorted: Vec<&str> = aliases.iter().map(|a| a.trim()).filter(|a| !a.is_empty()).collect();
    // longest first so "Fox News" wins over "Fox"
    sorted.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    sorted.dedup();
    sorted
        .iter()
        .map(|a| {
            let escaped = regex::escape(a);
            let starts_word = a.chars().next().is_some_and(|c| c.is_alphanumeric() || c == '_');
            let ends_word = a.chars().last().is_some_and(|c| c.is_alphanumeric() || c == '_');
            format!(
                "{}{}{}",
                if starts_word { r"\b" } else { "" },
                escaped,
                if ends_word { r"\b" } else { "" }
            )
        })
        .collect::<Vec<_>>()
        .join("|")
}

impl PortalScrubber {
    /// Panics if `aliases` holds no non-blank entry.
    pub fn new(aliases: &[String]) -> Self {
        let alts = alias_alternation(aliases);
        assert!(!alts.is_empty(), "scrubbing requires at least one alias");
        let byline = RegexBuilder::new(&format!(
            r"(?P<pre>^|[.!?][\x22'”’)]?[ \t]+|\n[ \t]*)(?:{alts})(?:'s|’s)?\b[^.!?\n]*?\bcontributed\s+to\s+this\s+report\.?[ \t]*\n?"
        ))
        .case_insensitive(true)
        .build()
        .expect("escaped alias pattern compiles");
        let mention = RegexBuilder::new(&format!(r"\[PORTAL\]|{alts}"))
            .case_insensitive(true)
            .build()
            .expect("escaped alias pattern compiles");
        Self { byline, mention }
    }

    pub fn scrub(&self, text: &str) -> (String, ScrubLog) {
        let mut log = ScrubLog::default();
        let without_bylines = self.byline.replace_all(text, |caps: &regex::Captures<'_>| {
            let pre = caps.name("pre").map_or("", |m| m.as_str());
            log.removed_bylines
                .push(caps[0][pre.len()..].trim().to_string());
            // the byline's trailing whitespace is consumed by the match
            pre.to_string()
        });
        let scrubbed = self.mention.replace_all(&without_bylines, |caps: &regex::Captures<'_>| {
            let m = &caps[0];
            if m.eq_ignore_ascii_case(PORTAL_TOKEN) {
                m.to_string()
            } else {
                log.replaced_mentions.push(m.to_string());
                PORTAL_TOKEN.to_string()
            }
        });
        let out = if log.removed_bylines.is_empty() {
            scrubbed.into_owned()
        } else {
            scrubbed.trim_end().to_string()
        };
        (out, log)
    }
}

/// Scrub one text against a portal's aliases.
pub fn scrub_portal_mentions(text: &str, aliases: &[String]) -> (String, ScrubLog) {
    PortalScrubber::new(aliases).scrub(text)
}
