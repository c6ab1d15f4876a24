use super::segment::default_abbreviations;

fn normalize_quote(c: char) -> char {
    match c {
        '’' | '‘' | '`' => '\'',
        '“' | '”' => '"',
        _ => c,
    }
}

/// Case-folded word tokens following the pre-trained 50-d vocabulary
/// convention: punctuation split off, contractions split at the apostrophe
/// (`don't` → `do`, `n't`; `trump's` → `trump`, `'s`), internal hyphens,
/// periods and digit-group commas kept.
pub fn tokenize(sentence: &str) -> Vec<String> {
    let chars: Vec<char> = sentence.chars().map(normalize_quote).collect();
    let n = chars.len();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < n {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if !c.is_alphanumeric() {
            tokens.push(c.to_lowercase().collect());
            i += 1;
            continue;
        }
        let mut j = i + 1;
        loop {
            if j < n && chars[j].is_alphanumeric() {
                j += 1;
            } else if j + 1 < n
                && ((matches!(chars[j], '-' | '.') && chars[j + 1].is_alphanumeric())
                    || (chars[j] == ',' && chars[j - 1].is_ascii_digit() && chars[j + 1].is_ascii_digit()))
            {
                j += 2;
            } else {
                break;
            }
        }
        let mut word: String = chars[i..j].iter().collect::<String>().to_lowercase();
        // keep the period of "u.s." style initialisms and listed abbreviations
        if j < n && chars[j] == '.' {
            let dotted = format!("{word}.");
            let initialism = word.contains('.') && word.split('.').all(|p| p.chars().count() <= 2);
            if initialism || default_abbreviations().contains(&dotted) {
                word = dotted;
                j += 1;
            }
        }
        if j < n && chars[j] == '\'' {
            let next = chars.get(j + 1).copied();
            let after = chars.get(j + 2).copied();
            if word.ends_with('n')
                && word.len() > 1
                && matches!(next, Some('t') | Some('T'))
                && !after.is_some_and(char::is_alphanumeric)
            {
                word.pop();
                tokens.push(word);
                tokens.push("n't".to_string());
                i = j + 2;
                continue;
            }
            if next.is_some_and(char::is_alphabetic) {
                let mut k = j + 1;
                while k < n && chars[k].is_alphabetic() {
                    k += 1;
                }
                tokens.push(word);
                tokens.push(chars[j..k].iter().collect::<String>().to_lowercase());
                i = k;
                continue;
            }
        }
        tokens.push(word);
        i = j;
    }
    tokens
}
