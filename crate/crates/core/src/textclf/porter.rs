//! Porter suffix-stripping stemmer.
//!
//! Classic five-step algorithm over ASCII lowercase words. Step 1c uses the
//! consonant-precedes-y variant (buy stays buy, happy becomes happi), which is
//! what the widely deployed Python implementation does and what downstream
//! feature tables expect.

/// Stem one lowercase token. Tokens shorter than three letters or containing
/// anything but ASCII letters are returned unchanged.
pub fn stem(word: &str) -> String {
    if word.len() < 3 || !word.bytes().all(|b| b.is_ascii_lowercase()) {
        return word.to_string();
    }
    let mut w = word.as_bytes().to_vec();
    step1a(&mut w);
    step1b(&mut w);
    step1c(&mut w);
    step2(&mut w);
    step3(&mut w);
    step4(&mut w);
    step5a(&mut w);
    step5b(&mut w);
    String::from_utf8(w).expect("ascii")
}

fn is_consonant(w: &[u8], i: usize) -> bool {
    match w[i] {
        b'a' | b'e' | b'i' | b'o' | b'u' => false,
        b'y' => i == 0 || !is_consonant(w, i - 1),
        _ => true,
    }
}

/// Number of vowel-consonant transitions: the m in [C](VC)^m[V].
fn measure(w: &[u8]) -> usize {
    let n = w.len();
    let mut m = 0;
    let mut i = 0;
    while i < n && is_consonant(w, i) {
        i += 1;
    }
    while i < n {
        while i < n && !is_consonant(w, i) {
            i += 1;
        }
        if i == n {
            break;
        }
        m += 1;
        while i < n && is_consonant(w, i) {
            i += 1;
        }
    }
    m
}

fn contains_vowel(w: &[u8]) -> bool {
    (0..w.len()).any(|i| !is_consonant(w, i))
}

fn ends_double_consonant(w: &[u8]) -> bool {
    let n = w.len();
    n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1)
}

/// *o: ends consonant-vowel-consonant where the final consonant is not w, x, y.
fn ends_cvc(w: &[u8]) -> bool {
    let n = w.len();
    n >= 3
        && is_consonant(w, n - 3)
        && !is_consonant(w, n - 2)
        && is_consonant(w, n - 1)
        && !matches!(w[n - 1], b'w' | b'x' | b'y')
}

fn ends_with(w: &[u8], suffix: &[u8]) -> bool {
    w.len() >= suffix.len() && &w[w.len() - suffix.len()..] == suffix
}

fn replace(w: &mut Vec<u8>, suffix_len: usize, replacement: &[u8]) {
    let keep = w.len() - suffix_len;
    w.truncate(keep);
    w.extend_from_slice(replacement);
}

/// Longest matching suffix wins; if its m-condition fails, the step does nothing.
/// Each rule fires when measure(stem) > m_gt.
fn apply_rules(w: &mut Vec<u8>, rules: &[(&[u8], &[u8], usize)]) {
    let best = rules
        .iter()
        .filter(|(suffix, _, _)| ends_with(w, suffix))
        .max_by_key(|(suffix, _, _)| suffix.len());
    if let Some(&(suffix, replacement, m_gt)) = best {
        let stem_len = w.len() - suffix.len();
        if measure(&w[..stem_len]) > m_gt {
            replace(w, suffix.len(), replacement);
        }
    }
}

fn step1a(w: &mut Vec<u8>) {
    if ends_with(w, b"sses") {
        replace(w, 4, b"ss");
    } else if ends_with(w, b"ies") {
        replace(w, 3, b"i");
    } else if ends_with(w, b"ss") {
        // keep
    } else if ends_with(w, b"s") {
        replace(w, 1, b"");
    }
}

fn step1b(w: &mut Vec<u8>) {
    if ends_with(w, b"eed") {
        if measure(&w[..w.len() - 3]) > 0 {
            replace(w, 3, b"ee");
        }
        return;
    }
    let removed = if ends_with(w, b"ed") && contains_vowel(&w[..w.len() - 2]) {
        replace(w, 2, b"");
        true
    } else if ends_with(w, b"ing") && contains_vowel(&w[..w.len() - 3]) {
        replace(w, 3, b"");
        true
    } else {
        false
    };
    if !removed {
        return;
    }
    if ends_with(w, b"at") || ends_with(w, b"bl") || ends_with(w, b"iz") {
        w.push(b'e');
    } else if ends_double_consonant(w) && !matches!(w[w.len() - 1], b'l' | b's' | b'z') {
        w.pop();
    } else if measure(w) == 1 && ends_cvc(w) {
        w.push(b'e');
    }
}

fn step1c(w: &mut Vec<u8>) {
    let n = w.len();
    if n > 2 && w[n - 1] == b'y' && is_consonant(w, n - 2) {
        w[n - 1] = b'i';
    }
}

fn step2(w: &mut Vec<u8>) {
    apply_rules(
        w,
        &[
            (b"ational", b"ate", 0),
            (b"tional", b"tion", 0),
            (b"enci", b"ence", 0),
            (b"anci", b"ance", 0),
            (b"izer", b"ize", 0),
            (b"bli", b"ble", 0),
            (b"alli", b"al", 0),
            (b"entli", b"ent", 0),
            (b"eli", b"e", 0),
            (b"ousli", b"ous", 0),
            (b"ization", b"ize", 0),
            (b"ation", b"ate", 0),
            (b"ator", b"ate", 0),
            (b"alism", b"al", 0),
            (b"iveness", b"ive", 0),
            (b"fulness", b"ful", 0),
            (b"ousness", b"ous", 0),
            (b"aliti", b"al", 0),
            (b"iviti", b"ive", 0),
            (b"biliti", b"ble", 0),
            (b"logi", b"log", 0),
        ],
    );
}

fn step3(w: &mut Vec<u8>) {
    apply_rules(
        w,
        &[
            (b"icate", b"ic", 0),
            (b"ative", b"", 0),
            (b"alize", b"al", 0),
            (b"iciti", b"ic", 0),
            (b"ical", b"ic", 0),
            (b"ful", b"", 0),
            (b"ness", b"", 0),
        ],
    );
}

fn step4(w: &mut Vec<u8>) {
    const SUFFIXES: &[&[u8]] = &[
        b"al", b"ance", b"ence", b"er", b"ic", b"able", b"ible", b"ant", b"ement", b"ment",
        b"ent", b"ion", b"ou", b"ism", b"ate", b"iti", b"ous", b"ive", b"ize",
    ];
    let best = SUFFIXES
        .iter()
        .filter(|s| ends_with(w, s))
        .max_by_key(|s| s.len());
    if let Some(&suffix) = best {
        let stem_len = w.len() - suffix.len();
        if measure(&w[..stem_len]) > 1 {
            if suffix == b"ion" && !matches!(w[stem_len.wrapping_sub(1)], b's' | b't') {
                return;
            }
            replace(w, suffix.len(), b"");
        }
    }
}

fn step5a(w: &mut Vec<u8>) {
    if !ends_with(w, b"e") {
        return;
    }
    let stem = &w[..w.len() - 1];
    let m = measure(stem);
    if m > 1 || (m == 1 && !ends_cvc(stem)) {
        w.pop();
    }
}

fn step5b(w: &mut Vec<u8>) {
    if measure(w) > 1 && ends_double_consonant(w) && w[w.len() - 1] == b'l' {
        w.pop();
    }
}
