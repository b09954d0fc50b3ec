#include "oovcat/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace oovcat::lexicon {

const char* category_name(Category c) {
    switch (c) {
        case Category::emoticon: return "emoticon";
        case Category::lengthening: return "lengthening";
        case Category::expression: return "expression";
        case Category::shortening_abbrev: return "shortening_abbrev";
        case Category::proper_noun: return "proper_noun";
        case Category::merging: return "merging";
    }
    return "?";
}

Category category_from_name(const std::string& name) {
    for (Category c : {Category::emoticon, Category::lengthening, Category::expression,
                       Category::shortening_abbrev, Category::proper_noun, Category::merging}) {
        if (name == category_name(c)) return c;
    }
    throw std::runtime_error("unknown category: " + name);
}

Dictionary Dictionary::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dictionary: " + path);
    Dictionary d;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (!line.empty()) d.words_.insert(corpus::lowercase(line));
    }
    if (d.words_.empty()) throw std::runtime_error("empty dictionary: " + path);
    return d;
}

Dictionary Dictionary::from_words(std::vector<std::string> words) {
    Dictionary d;
    for (auto& w : words) d.words_.insert(corpus::lowercase(std::move(w)));
    if (d.words_.empty()) throw std::runtime_error("empty dictionary");
    return d;
}

bool is_oov(const corpus::Token& token, const Dictionary& dict) {
    using corpus::TokenKind;
    if (token.kind != TokenKind::word && token.kind != TokenKind::punct_cluster) return false;
    return !dict.contains(corpus::lowercase(token.text));
}

OovInventory build_oov_inventory(const std::vector<corpus::Tweet>& tweets,
                                 const Dictionary& dict) {
    OovInventory inv;
    std::unordered_set<std::string> seen_months;
    for (const auto& tw : tweets) {
        if (seen_months.insert(tw.month).second) inv.months.push_back(tw.month);
        for (const auto& tok : tw.tokens) {
            if (!is_oov(tok, dict)) continue;
            auto& e = inv.entries[corpus::lowercase(tok.text)];
            ++e.per_month[tw.month];
            ++e.total;
        }
    }
    std::sort(inv.months.begin(), inv.months.end());
    return inv;
}

std::vector<std::string> select_stable_oov(const OovInventory& inv, std::size_t top_n) {
    if (top_n == 0) throw std::runtime_error("top_n must be >= 1");
    std::vector<std::pair<std::string, std::size_t>> stable;
    for (const auto& [word, e] : inv.entries) {
        bool everywhere = true;
        for (const auto& m : inv.months) {
            auto it = e.per_month.find(m);
            if (it == e.per_month.end() || it->second == 0) {
                everywhere = false;
                break;
            }
        }
        if (everywhere) stable.emplace_back(word, e.total);
    }
    std::sort(stable.begin(), stable.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (stable.size() > top_n) stable.resize(top_n);
    std::vector<std::string> out;
    out.reserve(stable.size());
    for (auto& [w, _] : stable) out.push_back(w);
    return out;
}

CategoryLexicon CategoryLexicon::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open lexicon: " + path);
    CategoryLexicon lex;
    lex.name = path;
    std::string line, current;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line[0] == '%' || line[0] == '#') continue;
        if (line.front() == '[' && line.back() == ']') {
            current = line.substr(1, line.size() - 2);
            if (current.empty()) throw std::runtime_error("empty category name in " + path);
            if (lex.categories.count(current))
                throw std::runtime_error("duplicate category " + current + " in " + path);
            lex.categories[current];
        } else {
            if (current.empty())
                throw std::runtime_error("pattern before any [category] in " + path);
            lex.categories[current].push_back(corpus::lowercase(line));
        }
    }
    return lex;
}

bool CategoryLexicon::matches(const std::string& category,
                              const std::string& lowercase_word) const {
    auto it = categories.find(category);
    if (it == categories.end()) return false;
    for (const auto& pat : it->second) {
        if (!pat.empty() && pat.back() == '*') {
            if (lowercase_word.compare(0, pat.size() - 1, pat, 0, pat.size() - 1) == 0)
                return true;
        } else if (lowercase_word == pat) {
            return true;
        }
    }
    return false;
}

std::vector<std::string> CategoryLexicon::category_names() const {
    std::vector<std::string> names;
    for (const auto& [name, _] : categories) names.push_back(name);
    return names;
}

std::map<std::string, double> lexicon_fractions(const std::vector<corpus::Token>& doc_tokens,
                                                const CategoryLexicon& lex) {
    std::map<std::string, double> out;
    std::size_t word_count = 0;
    std::map<std::string, std::size_t> hits;
    for (const auto& [cat, _] : lex.categories) hits[cat] = 0;
    for (const auto& tok : doc_tokens) {
        if (tok.kind != corpus::TokenKind::word) continue;
        ++word_count;
        auto lw = corpus::lowercase(tok.text);
        for (const auto& [cat, _] : lex.categories)
            if (lex.matches(cat, lw)) ++hits[cat];
    }
    for (const auto& [cat, h] : hits)
        out[cat] = word_count == 0 ? 0.0 : double(h) / double(word_count);
    return out;
}

std::map<std::string, double> ne_tag_fractions(const std::vector<corpus::Token>& doc_tokens,
                                               const CategoryLexicon& gazetteer) {
    std::map<std::string, double> out;
    std::map<std::string, std::size_t> hits;
    for (const auto& [cat, _] : gazetteer.categories) hits[cat] = 0;
    std::size_t word_count = 0;
    for (const auto& tok : doc_tokens) {
        if (tok.kind != corpus::TokenKind::word) continue;
        ++word_count;
        if (tok.ne && *tok.ne != "none" && !tok.ne->empty()) {
            ++hits[*tok.ne];  // creates the tag category if the gazetteer lacks it
        } else {
            auto lw = corpus::lowercase(tok.text);
            for (const auto& [cat, _] : gazetteer.categories)
                if (gazetteer.matches(cat, lw)) {
                    ++hits[cat];
                    break;
                }
        }
    }
    for (const auto& [cat, h] : hits)
        out[cat] = word_count == 0 ? 0.0 : double(h) / double(word_count);
    return out;
}

LabelSet load_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open label file: " + path);
    LabelSet labels;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        while (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected word<TAB>category");
        labels[line.substr(0, tab)] = category_from_name(line.substr(tab + 1));
    }
    return labels;
}

void write_labels(const std::string& path, const LabelSet& labels) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write label file: " + path);
    for (const auto& [word, cat] : labels) out << word << '\t' << category_name(cat) << '\n';
}

double fleiss_kappa(const std::vector<std::vector<std::size_t>>& ratings,
                    std::size_t annotators) {
    const std::size_t n_items = ratings.size();
    if (n_items < 2) throw std::runtime_error("fleiss_kappa: need >= 2 items");
    const std::size_t n_cats = ratings.front().size();
    if (n_cats < 2) throw std::runtime_error("fleiss_kappa: need >= 2 categories");

    std::vector<double> p_cat(n_cats, 0.0);
    double p_bar = 0.0;
    for (const auto& row : ratings) {
        if (row.size() != n_cats) throw std::runtime_error("fleiss_kappa: ragged matrix");
        std::size_t row_sum = 0;
        double agree = 0.0;
        for (std::size_t j = 0; j < n_cats; ++j) {
            row_sum += row[j];
            agree += double(row[j]) * double(row[j]);
            p_cat[j] += double(row[j]);
        }
        if (row_sum != annotators)
            throw std::runtime_error("fleiss_kappa: row sum != annotator count");
        p_bar += (agree - double(annotators)) /
                 (double(annotators) * double(annotators - 1));
    }
    p_bar /= double(n_items);
    double p_e = 0.0;
    for (double c : p_cat) {
        double pj = c / (double(n_items) * double(annotators));
        p_e += pj * pj;
    }
    if (p_e >= 1.0) return 1.0;  // unanimous single category
    return (p_bar - p_e) / (1.0 - p_e);
}

}  // namespace oovcat::lexicon
