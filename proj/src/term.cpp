#include "bccsp/term.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace bccsp {

namespace {

struct SymbolTable {
    std::mutex mu;
    std::vector<std::unique_ptr<std::string>> names;
    std::unordered_map<std::string, Symbol> index;
};

SymbolTable& symbols() {
    static SymbolTable table;
    return table;
}

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

bool valid_name(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (std::size_t i = 1; i < s.size(); ++i) {
        char c = s[i];
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') continue;
        if (c == '\'' && i + 1 == s.size()) continue;
        return false;
    }
    return true;
}

}  // namespace

Symbol intern_action(std::string_view name) {
    auto& t = symbols();
    std::lock_guard<std::mutex> lock(t.mu);
    auto it = t.index.find(std::string(name));
    if (it != t.index.end()) return it->second;
    if (t.names.size() >= 0xffff) throw AlphabetError("too many action names");
    auto id = static_cast<Symbol>(t.names.size());
    t.names.push_back(std::make_unique<std::string>(name));
    t.index.emplace(std::string(name), id);
    return id;
}

const std::string& action_name(Symbol s) {
    auto& t = symbols();
    std::lock_guard<std::mutex> lock(t.mu);
    return *t.names.at(s);
}

// ---------------------------------------------------------------- Alphabet

Alphabet Alphabet::interleaving(const std::vector<std::string>& names) {
    if (names.empty()) throw AlphabetError("alphabet must be non-empty");
    if (names.size() > 31) throw AlphabetError("alphabet too large");
    Alphabet a;
    for (const auto& n : names) {
        if (!valid_name(n) || n == "tau") throw AlphabetError("invalid action name '" + n + "'");
        Symbol s = intern_action(n);
        if (a.index_of(s)) throw AlphabetError("duplicate action '" + n + "'");
        a.primary_.push_back(static_cast<ActionId>(a.symbols_.size()));
        a.symbols_.push_back(s);
    }
    a.visible_ = a.symbols_.size();
    return a;
}

Alphabet Alphabet::sync(const std::vector<std::string>& base_names) {
    if (base_names.empty()) throw AlphabetError("alphabet must be non-empty");
    if (base_names.size() > 15) throw AlphabetError("alphabet too large");
    Alphabet a;
    a.sync_ = true;
    for (const auto& n : base_names) {
        if (!valid_name(n) || n == "tau" || n.back() == '\'')
            throw AlphabetError("invalid base action name '" + n + "'");
        Symbol s = intern_action(n);
        Symbol c = intern_action(n + "'");
        if (a.index_of(s)) throw AlphabetError("duplicate action '" + n + "'");
        auto i = static_cast<ActionId>(a.symbols_.size());
        a.primary_.push_back(i);
        a.symbols_.push_back(s);
        a.symbols_.push_back(c);
        a.complement_.push_back(static_cast<ActionId>(i + 1));
        a.complement_.push_back(i);
    }
    a.visible_ = a.symbols_.size();
    a.symbols_.push_back(intern_action("tau"));
    a.complement_.push_back(static_cast<ActionId>(a.visible_));
    return a;
}

Alphabet Alphabet::parse_list(std::string_view text, bool sync) {
    std::vector<std::string> names;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            names.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur.push_back(c);
        }
    }
    names.push_back(cur);
    return sync ? Alphabet::sync(names) : Alphabet::interleaving(names);
}

std::optional<ActionId> Alphabet::index_of(Symbol s) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i)
        if (symbols_[i] == s) return static_cast<ActionId>(i);
    return std::nullopt;
}

ActionId Alphabet::tau() const {
    if (!sync_) throw AlphabetError("tau requires sync mode");
    return static_cast<ActionId>(visible_);
}

ActionId Alphabet::complement(ActionId id) const {
    if (!sync_) throw AlphabetError("complement requires sync mode");
    return complement_.at(id);
}

std::vector<ActionId> Alphabet::visible_actions() const {
    std::vector<ActionId> out;
    for (std::size_t i = 0; i < visible_; ++i) out.push_back(static_cast<ActionId>(i));
    return out;
}

std::vector<ActionId> Alphabet::all_actions() const {
    std::vector<ActionId> out;
    for (std::size_t i = 0; i < symbols_.size(); ++i) out.push_back(static_cast<ActionId>(i));
    return out;
}

std::string Alphabet::describe() const {
    std::string s = "{";
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        if (i) s += ",";
        s += action_name(symbols_[i]);
    }
    return s + "}";
}

std::string Alphabet::render_set(ActionSet set) const {
    std::string s = "{";
    bool first = true;
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        if (!(set & (ActionSet{1} << i))) continue;
        if (!first) s += ",";
        first = false;
        s += action_name(symbols_[i]);
    }
    return s + "}";
}

// ---------------------------------------------------------------- Term

Term Term::make(Kind k, Symbol a, std::string name, const Term* l, const Term* r) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->action = a;
    n->name = std::move(name);
    std::size_t h = static_cast<std::size_t>(k) * 1000003u;
    switch (k) {
        case Kind::Nil:
            break;
        case Kind::Var:
            h = mix(h, std::hash<std::string>{}(n->name));
            n->closed = false;
            break;
        case Kind::Prefix:
            h = mix(h, a);
            break;
        case Kind::Sum:
        case Kind::Par:
            break;
    }
    if (l) {
        n->left = std::make_unique<Term>(*l);
        h = mix(h, l->hash());
        n->size += l->size();
        n->closed = n->closed && l->closed();
        n->par_free = l->par_free();
    }
    if (r) {
        n->right = std::make_unique<Term>(*r);
        h = mix(h, r->hash());
        n->size += r->size();
        n->closed = n->closed && r->closed();
        n->par_free = n->par_free && r->par_free();
    }
    if (k == Kind::Par) n->par_free = false;
    n->hash = h;
    return Term(std::shared_ptr<const Node>(std::move(n)));
}

Term::Term() : Term(nil()) {}

Term Term::nil() {
    static const Term t = make(Kind::Nil, 0, {}, nullptr, nullptr);
    return t;
}

Term Term::var(std::string name) { return make(Kind::Var, 0, std::move(name), nullptr, nullptr); }
Term Term::prefix(Symbol a, Term body) { return make(Kind::Prefix, a, {}, &body, nullptr); }
Term Term::sum(Term l, Term r) { return make(Kind::Sum, 0, {}, &l, &r); }
Term Term::par(Term l, Term r) { return make(Kind::Par, 0, {}, &l, &r); }

Term Term::sum_of(const std::vector<Term>& ts) {
    if (ts.empty()) return nil();
    Term acc = ts.front();
    for (std::size_t i = 1; i < ts.size(); ++i) acc = sum(acc, ts[i]);
    return acc;
}

const Term& Term::child(std::size_t i) const {
    if (i >= arity()) throw std::out_of_range("term has no child " + std::to_string(i));
    return i == 0 ? *node_->left : *node_->right;
}

std::size_t Term::arity() const {
    switch (kind()) {
        case Kind::Prefix:
            return 1;
        case Kind::Sum:
        case Kind::Par:
            return 2;
        default:
            return 0;
    }
}

bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash() || a.size() != b.size() || a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case Kind::Nil:
            return true;
        case Kind::Var:
            return a.var_name() == b.var_name();
        case Kind::Prefix:
            return a.action() == b.action() && a.body() == b.body();
        default:
            return a.left() == b.left() && a.right() == b.right();
    }
}

int Term::compare(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return 0;
    if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
    switch (a.kind()) {
        case Kind::Nil:
            return 0;
        case Kind::Var:
            return a.var_name().compare(b.var_name());
        case Kind::Prefix:
            if (a.action() != b.action()) return a.action() < b.action() ? -1 : 1;
            return compare(a.body(), b.body());
        default: {
            int c = compare(a.left(), b.left());
            return c != 0 ? c : compare(a.right(), b.right());
        }
    }
}

// ---------------------------------------------------------------- parsing

namespace {

class Parser {
public:
    Parser(std::string_view text, const Alphabet& alphabet, ParseOptions opts)
        : s_(text), alphabet_(alphabet), opts_(opts) {}

    Term run() {
        Term t = parse_sum();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return t;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError("syntax error: " + msg, pos_); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(std::string_view tok) {
        skip_ws();
        if (s_.substr(pos_, tok.size()) == tok) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    Term parse_sum() {
        Term t = parse_par();
        while (true) {
            skip_ws();
            if (pos_ < s_.size() && s_[pos_] == '+') {
                ++pos_;
                t = Term::sum(t, parse_par());
            } else {
                return t;
            }
        }
    }

    Term parse_par() {
        Term t = parse_unary();
        while (accept("||")) t = Term::par(t, parse_unary());
        return t;
    }

    std::string ident() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        if (pos_ < s_.size() && s_[pos_] == '\'') ++pos_;
        return std::string(s_.substr(start, pos_ - start));
    }

    Symbol action_symbol(const std::string& name, std::size_t at) {
        if (name == "tau" && !alphabet_.sync_mode()) throw ParseError("tau used outside sync mode", at);
        Symbol sym = intern_action(name);
        if (!alphabet_.contains(sym)) throw ParseError("unknown action '" + name + "'", at);
        return sym;
    }

    Term parse_unary() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Term t = parse_sum();
            if (!accept(")")) fail("expected ')'");
            return t;
        }
        if (c == '0') {
            ++pos_;
            if (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) fail("malformed constant");
            return Term::nil();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t at = pos_;
            std::string name = ident();
            skip_ws();
            if (pos_ < s_.size() && s_[pos_] == '.') {
                ++pos_;
                Symbol a = action_symbol(name, at);
                return Term::prefix(a, parse_unary());
            }
            if (name == "tau") return Term::prefix(action_symbol(name, at), Term::nil());
            if (opts_.bare_actions && alphabet_.contains(intern_action(name)))
                return Term::prefix(intern_action(name), Term::nil());
            if (name.back() == '\'') throw ParseError("unknown action '" + name + "'", at);
            return Term::var(name);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view s_;
    const Alphabet& alphabet_;
    ParseOptions opts_;
    std::size_t pos_ = 0;
};

void render_into(std::string& out, const Term& t, int ctx, bool abbrev) {
    switch (t.kind()) {
        case Kind::Nil:
            out += "0";
            return;
        case Kind::Var:
            out += t.var_name();
            return;
        case Kind::Prefix:
            out += action_name(t.action());
            if (abbrev && t.body().is_nil()) return;
            out += ".";
            render_into(out, t.body(), 3, abbrev);
            return;
        case Kind::Sum: {
            bool paren = ctx > 1;
            if (paren) out += "(";
            render_into(out, t.left(), 1, abbrev);
            out += " + ";
            render_into(out, t.right(), 2, abbrev);
            if (paren) out += ")";
            return;
        }
        case Kind::Par: {
            bool paren = ctx > 2;
            if (paren) out += "(";
            render_into(out, t.left(), 2, abbrev);
            out += " || ";
            render_into(out, t.right(), 3, abbrev);
            if (paren) out += ")";
            return;
        }
    }
}

void collect_summands(const Term& t, std::vector<Term>& out) {
    if (t.is_sum()) {
        collect_summands(t.left(), out);
        collect_summands(t.right(), out);
    } else if (!t.is_nil()) {
        out.push_back(t);
    }
}

}  // namespace

Term parse(std::string_view text, const Alphabet& alphabet, ParseOptions opts) {
    return Parser(text, alphabet, opts).run();
}

std::string render(const Term& t, bool abbreviate) {
    std::string out;
    render_into(out, t, 0, abbreviate);
    return out;
}

// ---------------------------------------------------------------- metrics

std::uint32_t depth(const Term& t) {
    switch (t.kind()) {
        case Kind::Nil:
        case Kind::Var:
            return 0;
        case Kind::Prefix:
            return 1 + depth(t.body());
        case Kind::Sum:
            return std::max(depth(t.left()), depth(t.right()));
        case Kind::Par:
            return depth(t.left()) + depth(t.right());
    }
    return 0;
}

std::uint32_t norm(const Term& t) {
    switch (t.kind()) {
        case Kind::Nil:
        case Kind::Var:
            return 0;
        case Kind::Prefix:
            return 1 + norm(t.body());
        case Kind::Sum:
            return std::min(norm(t.left()), norm(t.right()));
        case Kind::Par:
            return norm(t.left()) + norm(t.right());
    }
    return 0;
}

Metrics metrics(const Term& t) { return Metrics{t.size(), depth(t), norm(t)}; }

// ---------------------------------------------------------------- substitution

Term substitute(const Term& t, const Substitution& s) {
    if (t.closed() || s.empty()) return t;
    switch (t.kind()) {
        case Kind::Var: {
            auto it = s.find(t.var_name());
            return it == s.end() ? t : it->second;
        }
        case Kind::Prefix:
            return Term::prefix(t.action(), substitute(t.body(), s));
        case Kind::Sum:
            return Term::sum(substitute(t.left(), s), substitute(t.right(), s));
        case Kind::Par:
            return Term::par(substitute(t.left(), s), substitute(t.right(), s));
        default:
            return t;
    }
}

namespace {
void collect_vars(const Term& t, std::set<std::string>& out) {
    if (t.closed()) return;
    if (t.is_var()) {
        out.insert(t.var_name());
        return;
    }
    for (std::size_t i = 0; i < t.arity(); ++i) collect_vars(t.child(i), out);
}
}  // namespace

std::set<std::string> vars(const Term& t) {
    std::set<std::string> out;
    collect_vars(t, out);
    return out;
}

bool is_closed_substitution(const Substitution& s) {
    return std::all_of(s.begin(), s.end(), [](const auto& kv) { return kv.second.closed(); });
}

bool is_nil_substitution(const Substitution& s) {
    return std::all_of(s.begin(), s.end(), [](const auto& kv) {
        return kv.second.is_nil() || (kv.second.is_var() && kv.second.var_name() == kv.first);
    });
}

std::vector<Term> summands_in_order(const Term& t) {
    std::vector<Term> out;
    collect_summands(t, out);
    return out;
}

std::vector<Term> summands(const Term& t) {
    auto out = summands_in_order(t);
    std::vector<std::pair<std::string, Term>> keyed;
    keyed.reserve(out.size());
    for (auto& s : out) keyed.emplace_back(render(s), s);
    std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = keyed[i].second;
    return out;
}

// ---------------------------------------------------------------- 0 stripping

bool is_nil_term(const Term& t) {
    switch (t.kind()) {
        case Kind::Nil:
            return true;
        case Kind::Sum:
        case Kind::Par:
            return is_nil_term(t.left()) && is_nil_term(t.right());
        default:
            return false;
    }
}

Term strip_nil(const Term& t) {
    switch (t.kind()) {
        case Kind::Nil:
        case Kind::Var:
            return t;
        case Kind::Prefix:
            return Term::prefix(t.action(), strip_nil(t.body()));
        case Kind::Sum:
        case Kind::Par: {
            if (is_nil_term(t.left())) return strip_nil(t.right());
            if (is_nil_term(t.right())) return strip_nil(t.left());
            Term l = strip_nil(t.left());
            Term r = strip_nil(t.right());
            return t.is_sum() ? Term::sum(l, r) : Term::par(l, r);
        }
    }
    return t;
}

bool is_clean(const Term& t) {
    switch (t.kind()) {
        case Kind::Nil:
        case Kind::Var:
            return true;
        case Kind::Prefix:
            return is_clean(t.body());
        default:
            return !is_nil_term(t.left()) && !is_nil_term(t.right()) && is_clean(t.left()) && is_clean(t.right());
    }
}

// ---------------------------------------------------------------- misc

std::set<Symbol> actions_of(const Term& t) {
    std::set<Symbol> out;
    std::function<void(const Term&)> go = [&](const Term& u) {
        if (u.is_prefix()) out.insert(u.action());
        for (std::size_t i = 0; i < u.arity(); ++i) go(u.child(i));
    };
    go(t);
    return out;
}

void check_actions(const Term& t, const Alphabet& alphabet) {
    for (Symbol s : actions_of(t))
        if (!alphabet.contains(s))
            throw AlphabetError("action '" + action_name(s) + "' is not in alphabet " + alphabet.describe());
}

const Term& subterm(const Term& t, const Path& p) {
    const Term* cur = &t;
    for (std::size_t i : p) cur = &cur->child(i);
    return *cur;
}

namespace {
Term replace_rec(const Term& t, const Path& p, std::size_t k, const Term& r) {
    if (k == p.size()) return r;
    std::size_t i = p[k];
    switch (t.kind()) {
        case Kind::Prefix:
            if (i != 0) break;
            return Term::prefix(t.action(), replace_rec(t.body(), p, k + 1, r));
        case Kind::Sum:
        case Kind::Par: {
            if (i > 1) break;
            Term l = i == 0 ? replace_rec(t.left(), p, k + 1, r) : t.left();
            Term rr = i == 1 ? replace_rec(t.right(), p, k + 1, r) : t.right();
            return t.is_sum() ? Term::sum(l, rr) : Term::par(l, rr);
        }
        default:
            break;
    }
    throw std::out_of_range("invalid path into term");
}
}  // namespace

Term replace_at(const Term& t, const Path& p, const Term& replacement) { return replace_rec(t, p, 0, replacement); }

std::string render_substitution(const Substitution& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& [k, v] : s) {
        if (!first) out += ", ";
        first = false;
        out += k + " := " + render(v);
    }
    return out + "}";
}

}  // namespace bccsp
