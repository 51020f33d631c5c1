#include "shrubkit/logic.hpp"

#include <cctype>
#include <sstream>

namespace shrubkit {

FPtr mk_edge(std::string a, std::string b) {
  return std::make_shared<FNode>(FNode{FK::Edge, std::move(a), std::move(b), "", nullptr, nullptr});
}
FPtr mk_eq(std::string a, std::string b) {
  return std::make_shared<FNode>(FNode{FK::Eq, std::move(a), std::move(b), "", nullptr, nullptr});
}
FPtr mk_color(std::string name, std::string v) {
  return std::make_shared<FNode>(FNode{FK::Color, std::move(name), std::move(v), "", nullptr, nullptr});
}
FPtr mk_not(FPtr x) {
  return std::make_shared<FNode>(FNode{FK::Not, "", "", "", std::move(x), nullptr});
}
FPtr mk_and(FPtr l, FPtr r) {
  return std::make_shared<FNode>(FNode{FK::And, "", "", "", std::move(l), std::move(r)});
}
FPtr mk_or(FPtr l, FPtr r) {
  return std::make_shared<FNode>(FNode{FK::Or, "", "", "", std::move(l), std::move(r)});
}
FPtr mk_exists(std::string var, FPtr body) {
  return std::make_shared<FNode>(FNode{FK::Exists, "", "", std::move(var), std::move(body), nullptr});
}
FPtr mk_forall(std::string var, FPtr body) {
  return std::make_shared<FNode>(FNode{FK::Forall, "", "", std::move(var), std::move(body), nullptr});
}

namespace {

struct Token {
  enum Kind { Ident, LPar, RPar, Comma, Bang, Amp, Pipe, Arrow, Eq, Neq, Dot, End } kind;
  std::string text;
  int pos;
};

struct Lexer {
  std::vector<Token> toks;
  size_t i = 0;

  explicit Lexer(const std::string& s) {
    size_t p = 0;
    while (p < s.size()) {
      char c = s[p];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++p;
        continue;
      }
      int pos = static_cast<int>(p);
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        size_t q = p;
        while (q < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[q])) || s[q] == '_'))
          ++q;
        toks.push_back({Token::Ident, s.substr(p, q - p), pos});
        p = q;
        continue;
      }
      switch (c) {
        case '(': toks.push_back({Token::LPar, "(", pos}); ++p; break;
        case ')': toks.push_back({Token::RPar, ")", pos}); ++p; break;
        case ',': toks.push_back({Token::Comma, ",", pos}); ++p; break;
        case '&': toks.push_back({Token::Amp, "&", pos}); ++p; break;
        case '|': toks.push_back({Token::Pipe, "|", pos}); ++p; break;
        case '.': toks.push_back({Token::Dot, ".", pos}); ++p; break;
        case '=': toks.push_back({Token::Eq, "=", pos}); ++p; break;
        case '!':
          if (p + 1 < s.size() && s[p + 1] == '=') {
            toks.push_back({Token::Neq, "!=", pos});
            p += 2;
          } else {
            toks.push_back({Token::Bang, "!", pos});
            ++p;
          }
          break;
        case '-':
          if (p + 1 < s.size() && s[p + 1] == '>') {
            toks.push_back({Token::Arrow, "->", pos});
            p += 2;
          } else {
            throw ParseError("unexpected '-' in formula", 1);
          }
          break;
        default:
          throw ParseError(std::string("unexpected character '") + c + "' in formula", 1);
      }
    }
    toks.push_back({Token::End, "", static_cast<int>(s.size())});
  }

  const Token& peek() const { return toks[i]; }
  Token next() { return toks[i++]; }
  bool accept(Token::Kind k) {
    if (toks[i].kind == k) {
      ++i;
      return true;
    }
    return false;
  }
  void expect(Token::Kind k, const std::string& what) {
    if (!accept(k))
      throw ParseError("expected " + what + " at offset " + std::to_string(peek().pos), 1);
  }
};

struct Parser {
  Lexer lex;
  explicit Parser(const std::string& s) : lex(s) {}

  FPtr parse() {
    FPtr f = impl();
    if (lex.peek().kind != Token::End)
      throw ParseError("trailing input at offset " + std::to_string(lex.peek().pos), 1);
    return f;
  }

  FPtr impl() {
    FPtr l = disj();
    while (lex.accept(Token::Arrow)) {
      FPtr r = disj();
      l = mk_or(mk_not(std::move(l)), std::move(r));
    }
    return l;
  }

  FPtr disj() {
    FPtr l = conj();
    while (lex.accept(Token::Pipe)) l = mk_or(std::move(l), conj());
    return l;
  }

  FPtr conj() {
    FPtr l = lit();
    while (lex.accept(Token::Amp)) l = mk_and(std::move(l), lit());
    return l;
  }

  FPtr lit() {
    if (lex.accept(Token::Bang)) return mk_not(lit());
    const Token& t = lex.peek();
    if (t.kind == Token::Ident && (t.text == "exists" || t.text == "forall")) {
      bool ex = t.text == "exists";
      lex.next();
      Token var = lex.next();
      if (var.kind != Token::Ident)
        throw ParseError("expected variable after quantifier", 1);
      lex.expect(Token::Dot, "'.'");
      FPtr body = impl();  // quantifier bodies extend maximally right
      return ex ? mk_exists(var.text, std::move(body))
                : mk_forall(var.text, std::move(body));
    }
    if (lex.accept(Token::LPar)) {
      FPtr f = impl();
      lex.expect(Token::RPar, "')'");
      return f;
    }
    return atom();
  }

  FPtr atom() {
    Token t = lex.next();
    if (t.kind != Token::Ident)
      throw ParseError("expected atom at offset " + std::to_string(t.pos), 1);
    if (t.text == "E" && lex.peek().kind == Token::LPar) {
      lex.next();
      Token a = lex.next();
      lex.expect(Token::Comma, "','");
      Token b = lex.next();
      lex.expect(Token::RPar, "')'");
      if (a.kind != Token::Ident || b.kind != Token::Ident)
        throw ParseError("expected variables in E(,)", 1);
      return mk_edge(a.text, b.text);
    }
    if (lex.peek().kind == Token::LPar) {
      lex.next();
      Token v = lex.next();
      lex.expect(Token::RPar, "')'");
      if (v.kind != Token::Ident)
        throw ParseError("expected variable in color atom", 1);
      return mk_color(t.text, v.text);
    }
    if (lex.accept(Token::Eq)) {
      Token b = lex.next();
      if (b.kind != Token::Ident)
        throw ParseError("expected variable after '='", 1);
      return mk_eq(t.text, b.text);
    }
    if (lex.accept(Token::Neq)) {
      Token b = lex.next();
      if (b.kind != Token::Ident)
        throw ParseError("expected variable after '!='", 1);
      return mk_not(mk_eq(t.text, b.text));
    }
    throw ParseError("expected atom at offset " + std::to_string(t.pos), 1);
  }
};

void free_vars_rec(const FPtr& f, std::set<std::string>& bound,
                   std::set<std::string>& out);

// renames bound variables apart from free variables and from each other
FPtr alpha_rename(const FPtr& f, std::map<std::string, std::string> env,
                  std::set<std::string>& used, int& counter) {
  auto subst = [&](const std::string& name) {
    auto it = env.find(name);
    return it == env.end() ? name : it->second;
  };
  switch (f->kind) {
    case FK::Edge:
      return mk_edge(subst(f->a), subst(f->b));
    case FK::Eq:
      return mk_eq(subst(f->a), subst(f->b));
    case FK::Color:
      return mk_color(f->a, subst(f->b));
    case FK::Not:
      return mk_not(alpha_rename(f->l, env, used, counter));
    case FK::And:
      return mk_and(alpha_rename(f->l, env, used, counter),
                    alpha_rename(f->r, env, used, counter));
    case FK::Or:
      return mk_or(alpha_rename(f->l, env, used, counter),
                   alpha_rename(f->r, env, used, counter));
    case FK::Exists:
    case FK::Forall: {
      std::string fresh = f->var;
      while (used.count(fresh)) fresh = "v" + std::to_string(counter++);
      used.insert(fresh);
      env[f->var] = fresh;
      FPtr body = alpha_rename(f->l, env, used, counter);
      return f->kind == FK::Exists ? mk_exists(fresh, std::move(body))
                                   : mk_forall(fresh, std::move(body));
    }
  }
  throw ValidationError("unreachable formula kind");
}

void free_vars_rec(const FPtr& f, std::set<std::string>& bound,
                   std::set<std::string>& out) {
  switch (f->kind) {
    case FK::Edge:
    case FK::Eq:
      if (!bound.count(f->a)) out.insert(f->a);
      if (!bound.count(f->b)) out.insert(f->b);
      break;
    case FK::Color:
      if (!bound.count(f->b)) out.insert(f->b);
      break;
    case FK::Not:
      free_vars_rec(f->l, bound, out);
      break;
    case FK::And:
    case FK::Or:
      free_vars_rec(f->l, bound, out);
      free_vars_rec(f->r, bound, out);
      break;
    case FK::Exists:
    case FK::Forall: {
      bool inserted = bound.insert(f->var).second;
      free_vars_rec(f->l, bound, out);
      if (inserted) bound.erase(f->var);
      break;
    }
  }
}

int rank_rec(const FPtr& f) {
  switch (f->kind) {
    case FK::Edge:
    case FK::Eq:
    case FK::Color:
      return 0;
    case FK::Not:
      return rank_rec(f->l);
    case FK::And:
    case FK::Or:
      return std::max(rank_rec(f->l), rank_rec(f->r));
    case FK::Exists:
    case FK::Forall:
      return 1 + rank_rec(f->l);
  }
  return 0;
}

}  // namespace

Formula wrap_formula(FPtr root) {
  Formula f;
  f.root = std::move(root);
  std::set<std::string> bound, fv;
  free_vars_rec(f.root, bound, fv);
  f.free_vars.assign(fv.begin(), fv.end());
  f.rank = rank_rec(f.root);
  return f;
}

Formula parse_formula(const std::string& text) {
  Parser p(text);
  FPtr raw = p.parse();
  // bound variables keep their surface name when unambiguous; clashes with a
  // free variable or an earlier binder get fresh names
  std::set<std::string> bound, used;
  free_vars_rec(raw, bound, used);
  int counter = 1;
  FPtr renamed = alpha_rename(raw, {}, used, counter);
  return wrap_formula(std::move(renamed));
}

namespace {

// precedence: 0 = or/impl level, 1 = and, 2 = literal
void print_rec(const FPtr& f, std::ostringstream& out, int prec) {
  switch (f->kind) {
    case FK::Edge:
      out << "E(" << f->a << "," << f->b << ")";
      return;
    case FK::Eq:
      out << f->a << "=" << f->b;
      return;
    case FK::Color:
      out << f->a << "(" << f->b << ")";
      return;
    case FK::Not:
      out << "!";
      print_rec(f->l, out, 2);
      return;
    case FK::And: {
      bool par = prec > 1;
      if (par) out << "(";
      print_rec(f->l, out, 1);
      out << " & ";
      print_rec(f->r, out, 2);
      if (par) out << ")";
      return;
    }
    case FK::Or: {
      bool par = prec > 0;
      if (par) out << "(";
      print_rec(f->l, out, 0);
      out << " | ";
      print_rec(f->r, out, 1);
      if (par) out << ")";
      return;
    }
    case FK::Exists:
    case FK::Forall: {
      // body binds maximally right, so the quantifier itself needs parens
      // whenever it is not the rightmost part of its context
      bool par = prec > 0;
      if (par) out << "(";
      out << (f->kind == FK::Exists ? "exists " : "forall ") << f->var << ". ";
      print_rec(f->l, out, 0);
      if (par) out << ")";
      return;
    }
  }
}

}  // namespace

std::string node_to_string(const FPtr& node) {
  std::ostringstream out;
  print_rec(node, out, 0);
  return out.str();
}

std::string formula_to_string(const Formula& f) { return node_to_string(f.root); }

bool evaluate_node(const ColoredGraph& g, const FPtr& f, Assignment& asg) {
  auto lookup = [&](const std::string& name) -> Vertex {
    for (auto it = asg.rbegin(); it != asg.rend(); ++it)
      if (it->first == name) return it->second;
    throw ValidationError("unbound variable '" + name + "'");
  };
  switch (f->kind) {
    case FK::Edge:
      return g.has_edge(lookup(f->a), lookup(f->b));
    case FK::Eq:
      return lookup(f->a) == lookup(f->b);
    case FK::Color:
      return g.has_color(f->a, lookup(f->b));
    case FK::Not:
      return !evaluate_node(g, f->l, asg);
    case FK::And:
      return evaluate_node(g, f->l, asg) && evaluate_node(g, f->r, asg);
    case FK::Or:
      return evaluate_node(g, f->l, asg) || evaluate_node(g, f->r, asg);
    case FK::Exists: {
      asg.emplace_back(f->var, 0);
      for (Vertex b = 0; b < g.n; ++b) {
        asg.back().second = b;
        if (evaluate_node(g, f->l, asg)) {
          asg.pop_back();
          return true;
        }
      }
      asg.pop_back();
      return false;
    }
    case FK::Forall: {
      asg.emplace_back(f->var, 0);
      for (Vertex b = 0; b < g.n; ++b) {
        asg.back().second = b;
        if (!evaluate_node(g, f->l, asg)) {
          asg.pop_back();
          return false;
        }
      }
      asg.pop_back();
      return true;
    }
  }
  return false;
}

bool evaluate(const ColoredGraph& g, const Formula& f, const Assignment& asg) {
  for (const auto& fv : f.free_vars) {
    bool found = false;
    for (const auto& [name, _] : asg)
      if (name == fv) found = true;
    if (!found) throw ArityError("assignment misses free variable '" + fv + "'");
  }
  Assignment local = asg;
  return evaluate_node(g, f.root, local);
}

namespace {

FPtr normalize_rec(const FPtr& f) {
  switch (f->kind) {
    case FK::Edge:
    case FK::Eq:
    case FK::Color:
      return f;
    case FK::Not:
      return mk_not(normalize_rec(f->l));
    case FK::And:
      return mk_and(normalize_rec(f->l), normalize_rec(f->r));
    case FK::Or:
      return mk_or(normalize_rec(f->l), normalize_rec(f->r));
    case FK::Exists:
      return mk_exists(f->var, normalize_rec(f->l));
    case FK::Forall:
      return mk_not(mk_exists(f->var, mk_not(normalize_rec(f->l))));
  }
  throw ValidationError("unreachable formula kind");
}

void exists_depth1_rec(const FPtr& f, std::vector<FPtr>& out) {
  switch (f->kind) {
    case FK::Edge:
    case FK::Eq:
    case FK::Color:
      return;
    case FK::Not:
      exists_depth1_rec(f->l, out);
      return;
    case FK::And:
    case FK::Or:
      exists_depth1_rec(f->l, out);
      exists_depth1_rec(f->r, out);
      return;
    case FK::Exists:
      out.push_back(f);
      return;
    case FK::Forall:
      throw ValidationError("input to exists_depth1 must be normalized");
  }
}

}  // namespace

Formula normalize(const Formula& f) { return wrap_formula(normalize_rec(f.root)); }

std::vector<FPtr> exists_depth1(const Formula& normalized) {
  std::vector<FPtr> out;
  exists_depth1_rec(normalized.root, out);
  return out;
}

DirectedGraph interpret(const ColoredGraph& g, const Formula& f) {
  if (f.free_vars.size() != 2)
    throw ArityError("binary interpretation needs exactly 2 free variables, got " +
                     std::to_string(f.free_vars.size()));
  const std::string& xv = f.free_vars[0];
  const std::string& yv = f.free_vars[1];
  std::vector<std::vector<Vertex>> rows(g.n);
  parallel_for(g.n, [&](int u) {
    Assignment asg{{xv, u}, {yv, 0}};
    for (Vertex v = 0; v < g.n; ++v) {
      if (v == u) continue;
      asg[1].second = v;
      Assignment local = asg;
      if (evaluate_node(g, f.root, local)) rows[u].push_back(v);
    }
  });
  std::vector<std::pair<Vertex, Vertex>> arcs;
  for (Vertex u = 0; u < g.n; ++u)
    for (Vertex v : rows[u]) arcs.emplace_back(u, v);
  return make_digraph(g.n, std::move(arcs));
}

std::set<std::vector<Vertex>> phi_type(const ColoredGraph& g, const Formula& f,
                                       const std::vector<std::string>& xvars,
                                       const std::vector<std::string>& yvars,
                                       const std::vector<Vertex>& u,
                                       const std::vector<Vertex>& a) {
  if (u.size() != xvars.size())
    throw ArityError("tuple length does not match first variable block");
  {
    std::set<std::string> blocks(xvars.begin(), xvars.end());
    blocks.insert(yvars.begin(), yvars.end());
    if (blocks.size() != xvars.size() + yvars.size())
      throw ArityError("variable blocks overlap");
    for (const auto& fv : f.free_vars)
      if (!blocks.count(fv))
        throw ArityError("free variable '" + fv + "' not covered by blocks");
  }
  std::set<std::vector<Vertex>> out;
  std::vector<Vertex> tuple(yvars.size(), 0);
  Assignment base;
  for (size_t i = 0; i < xvars.size(); ++i) base.emplace_back(xvars[i], u[i]);
  size_t total = 1;
  for (size_t i = 0; i < yvars.size(); ++i) total *= a.size();
  if (yvars.empty()) {
    Assignment local = base;
    if (evaluate_node(g, f.root, local)) out.insert(std::vector<Vertex>{});
    return out;
  }
  for (size_t code = 0; code < total; ++code) {
    size_t c = code;
    Assignment asg = base;
    for (size_t i = 0; i < yvars.size(); ++i) {
      tuple[i] = a[c % a.size()];
      c /= a.size();
      asg.emplace_back(yvars[i], tuple[i]);
    }
    if (evaluate_node(g, f.root, asg)) out.insert(tuple);
  }
  return out;
}

int count_nodes(const FPtr& node) {
  if (!node) return 0;
  return 1 + count_nodes(node->l) + count_nodes(node->r);
}

}  // namespace shrubkit
