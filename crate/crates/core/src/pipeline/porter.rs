//! Porter stemming algorithm (original 1980 rule set).
//!
//! Words of one or two characters are returned unchanged, matching the
//! reference implementation's documented departure from the published
//! paper; everything else follows the five-step suffix-stripping rules
//! as published. Within a step the longest matching suffix wins.
//!
//! Characters outside `a..=z` (digits, apostrophes, accented letters)
//! are treated as consonants, so arbitrary tokens stem deterministically.

/// Stem a single lowercase token.
pub fn stem(word: &str) -> String {
    let chars: Vec<char> = word.chars().collect();
    if chars.len() <= 2 {
        return word.to_string();
    }
    let w = Stem(chars);
    let w = step_1a(w);
    let w = step_1b(w);
    let w = step_1c(w);
    let w = step_2(w);
    let w = step_3(w);
    let w = step_4(w);
    let w = step_5a(w);
    let w = step_5b(w);
    w.0.into_iter().collect()
}

struct Stem(Vec<char>);

impl Stem {
    fn len(&self) -> usize {
        self.0.len()
    }

    /// Consonant test at position `i` per the 1980 definition: a, e, i,
    /// o, u are vowels; y is a vowel when preceded by a consonant.
    fn is_consonant(&self, i: usize) -> bool {
        match self.0[i] {
            'a' | 'e' | 'i' | 'o' | 'u' => false,
            'y' => i == 0 || !self.is_consonant(i - 1),
            _ => true,
        }
    }

    /// The measure m of the first `len` characters: the number of VC
    /// sequences in the form [C](VC)^m[V].
    fn measure(&self, len: usize) -> usize {
        let mut m = 0;
        let mut i = 0;
        // skip leading consonants
        while i < len && self.is_consonant(i) {
            i += 1;
        }
        loop {
            // skip vowels
            while i < len && !self.is_consonant(i) {
                i += 1;
            }
            if i >= len {
                return m;
            }
            // a consonant run after a vowel run closes one VC pair
            while i < len && self.is_consonant(i) {
                i += 1;
            }
            m += 1;
        }
    }

    /// True when the first `len` characters contain a vowel.
    fn has_vowel(&self, len: usize) -> bool {
        (0..len).any(|i| !self.is_consonant(i))
    }

    /// *d: the first `len` characters end with a double consonant.
    fn ends_double_consonant(&self, len: usize) -> bool {
        len >= 2 && self.0[len - 1] == self.0[len - 2] && self.is_consonant(len - 1)
    }

    /// *o: the first `len` characters end consonant-vowel-consonant where
    /// the final consonant is not w, x or y.
    fn ends_cvc(&self, len: usize) -> bool {
        if len < 3 {
            return false;
        }
        if matches!(self.0[len - 1], 'w' | 'x' | 'y') {
            return false;
        }
        self.is_consonant(len - 1) && !self.is_consonant(len - 2) && self.is_consonant(len - 3)
    }

    fn ends_with(&self, suffix: &str) -> bool {
        let n = suffix.chars().count();
        if n > self.len() {
            return false;
        }
        self.0[self.len() - n..].iter().copied().eq(suffix.chars())
    }

    fn truncate(&mut self, new_len: usize) {
        self.0.truncate(new_len);
    }

    fn push_str(&mut self, s: &str) {
        self.0.extend(s.chars());
    }

    /// Replace `suffix` with `replacement` if the stem before the suffix
    /// has measure > `min_measure`. Returns true when the suffix matched
    /// (whether or not the measure condition let the rule fire), since
    /// only the longest matching suffix in a step may be considered.
    fn replace_if_measure(&mut self, suffix: &str, replacement: &str, min_measure: usize) -> bool {
        if !self.ends_with(suffix) {
            return false;
        }
        let stem_len = self.len() - suffix.chars().count();
        if self.measure(stem_len) > min_measure {
            self.truncate(stem_len);
            self.push_str(replacement);
        }
        true
    }
}

/// Step 1a: plural endings. SSES -> SS, IES -> I, SS -> SS, S -> "".
fn step_1a(mut w: Stem) -> Stem {
    if w.ends_with("sses") || w.ends_with("ies") {
        let n = w.len();
        w.truncate(n - 2);
    } else if w.ends_with("ss") {
        // unchanged
    } else if w.ends_with("s") {
        let n = w.len();
        w.truncate(n - 1);
    }
    w
}

/// Step 1b: -eed, -ed, -ing, with cleanup of the exposed stem.
fn step_1b(mut w: Stem) -> Stem {
    if w.ends_with("eed") {
        let stem_len = w.len() - 3;
        if w.measure(stem_len) > 0 {
            let n = w.len();
            w.truncate(n - 1); // eed -> ee
        }
        return w;
    }
    let stripped = if w.ends_with("ed") && w.has_vowel(w.len() - 2) {
        let n = w.len();
        w.truncate(n - 2);
        true
    } else if w.ends_with("ing") && w.has_vowel(w.len() - 3) {
        let n = w.len();
        w.truncate(n - 3);
        true
    } else {
        false
    };
    if stripped {
        if w.ends_with("at") || w.ends_with("bl") || w.ends_with("iz") {
            w.push_str("e");
        } else if w.ends_double_consonant(w.len()) && !w.ends_with("l") && !w.ends_with("s") && !w.ends_with("z") {
            let n = w.len();
            w.truncate(n - 1);
        } else if w.measure(w.len()) == 1 && w.ends_cvc(w.len()) {
            w.push_str("e");
        }
    }
    w
}

/// Step 1c: (*v*) Y -> I.
fn step_1c(mut w: Stem) -> Stem {
    if w.ends_with("y") && w.has_vowel(w.len() - 1) {
        let n = w.len();
        w.truncate(n - 1);
        w.push_str("i");
    }
    w
}

/// Step 2: double-suffix reductions, m > 0. Longest matching suffix wins.
fn step_2(mut w: Stem) -> Stem {
    const RULES: &[(&str, &str)] = &[
        ("ational", "ate"),
        ("tional", "tion"),
        ("enci", "ence"),
        ("anci", "ance"),
        ("izer", "ize"),
        ("abli", "able"),
        ("alli", "al"),
        ("entli", "ent"),
        ("eli", "e"),
        ("ousli", "ous"),
        ("ization", "ize"),
        ("ation", "ate"),
        ("ator", "ate"),
        ("alism", "al"),
        ("iveness", "ive"),
        ("fulness", "ful"),
        ("ousness", "ous"),
        ("aliti", "al"),
        ("iviti", "ive"),
        ("biliti", "ble"),
    ];
    apply_longest(&mut w, RULES, 0);
    w
}

/// Step 3: -icate, -ative, -alize, -iciti, -ical, -ful, -ness, m > 0.
fn step_3(mut w: Stem) -> Stem {
    const RULES: &[(&str, &str)] = &[
        ("icate", "ic"),
        ("ative", ""),
        ("alize", "al"),
        ("iciti", "ic"),
        ("ical", "ic"),
        ("ful", ""),
        ("ness", ""),
    ];
    apply_longest(&mut w, RULES, 0);
    w
}

/// Step 4: suffix deletion for m > 1; -ion additionally requires the stem
/// to end in s or t.
fn step_4(mut w: Stem) -> Stem {
    const SUFFIXES: &[&str] = &[
        "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement", "ment", "ent", "ion",
        "ou", "ism", "ate", "iti", "ous", "ive", "ize",
    ];
    let mut best: Option<&str> = None;
    for suffix in SUFFIXES {
        if w.ends_with(suffix) && best.is_none_or(|b| suffix.len() > b.len()) {
            best = Some(suffix);
        }
    }
    if let Some(suffix) = best {
        let stem_len = w.len() - suffix.len();
        let extra_ok =
            suffix != "ion" || (stem_len >= 1 && matches!(w.0[stem_len - 1], 's' | 't'));
        if extra_ok && w.measure(stem_len) > 1 {
            w.truncate(stem_len);
        }
    }
    w
}

/// Step 5a: drop a final e when m > 1, or when m = 1 and the stem before
/// it is not *o.
fn step_5a(mut w: Stem) -> Stem {
    if w.ends_with("e") {
        let stem_len = w.len() - 1;
        let m = w.measure(stem_len);
        if m > 1 || (m == 1 && !w.ends_cvc(stem_len)) {
            w.truncate(stem_len);
        }
    }
    w
}

/// Step 5b: m > 1 and *d and *L -> single letter.
fn step_5b(mut w: Stem) -> Stem {
    if w.ends_with("ll") && w.measure(w.len()) > 1 {
        let n = w.len();
        w.truncate(n - 1);
    }
    w
}

fn apply_longest(w: &mut Stem, rules: &[(&str, &str)], min_measure: usize) {
    let mut best: Option<(&str, &str)> = None;
    for (suffix, replacement) in rules {
        if w.ends_with(suffix) && best.is_none_or(|(b, _)| suffix.len() > b.len()) {
            best = Some((suffix, replacement));
        }
    }
    if let Some((suffix, replacement)) = best {
        w.replace_if_measure(suffix, replacement, min_measure);
    }
}
