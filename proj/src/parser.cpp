#include "tsa/parser.hpp"

#include <cctype>
#include <limits>
#include <set>
#include <vector>

namespace tsa {

namespace {

enum class Tok {
  Ident, Int, Str,
  Var, If, Else, For, In, While, Function, Return, True, False, Null,
  LParen, RParen, LBrace, RBrace, LBracket, RBracket,
  Comma, Semi, Colon, Dot, Assign, Plus, Minus, Star, Slash,
  End,
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::Str: return "string";
    case Tok::Var: return "'var'";
    case Tok::If: return "'if'";
    case Tok::Else: return "'else'";
    case Tok::For: return "'for'";
    case Tok::In: return "'in'";
    case Tok::While: return "'while'";
    case Tok::Function: return "'function'";
    case Tok::Return: return "'return'";
    case Tok::True: return "'true'";
    case Tok::False: return "'false'";
    case Tok::Null: return "'null'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Colon: return "':'";
    case Tok::Dot: return "'.'";
    case Tok::Assign: return "'='";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind = Tok::End;
  Span span;
  std::string text;  // identifier name, string contents, integer digits
  bool nl_before = false;
};

std::vector<Token> lex(const std::string& src) {
  static const std::pair<const char*, Tok> keywords[] = {
      {"var", Tok::Var},       {"if", Tok::If},         {"else", Tok::Else},
      {"for", Tok::For},       {"in", Tok::In},         {"while", Tok::While},
      {"function", Tok::Function}, {"return", Tok::Return}, {"true", Tok::True},
      {"false", Tok::False},   {"null", Tok::Null},
  };
  std::vector<Token> out;
  size_t i = 0;
  bool nl = false;
  auto span = [](size_t a, size_t b) { return Span{uint32_t(a), uint32_t(b)}; };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      nl = true;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    Token t;
    t.nl_before = nl;
    nl = false;
    size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) ++i;
      t.text = src.substr(start, i - start);
      t.kind = Tok::Ident;
      for (const auto& [kw, k] : keywords)
        if (t.text == kw) t.kind = k;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
      t.kind = Tok::Int;
      t.text = src.substr(start, i - start);
    } else if (c == '"') {
      ++i;
      bool closed = false;
      while (i < src.size()) {
        char d = src[i++];
        if (d == '"') {
          closed = true;
          break;
        }
        if (d == '\\') {
          if (i >= src.size()) break;
          char e = src[i++];
          if (e == 'n') t.text += '\n';
          else if (e == '"' || e == '\\') t.text += e;
          else throw ParseError("bad escape in string literal", span(i - 2, i), "\\\" \\\\ or \\n");
        } else if (d == '\n') {
          throw ParseError("newline in string literal", span(start, i), "'\"'");
        } else {
          t.text += d;
        }
      }
      if (!closed) throw ParseError("unterminated string literal", span(start, src.size()), "'\"'");
      t.kind = Tok::Str;
    } else {
      ++i;
      switch (c) {
        case '(': t.kind = Tok::LParen; break;
        case ')': t.kind = Tok::RParen; break;
        case '{': t.kind = Tok::LBrace; break;
        case '}': t.kind = Tok::RBrace; break;
        case '[': t.kind = Tok::LBracket; break;
        case ']': t.kind = Tok::RBracket; break;
        case ',': t.kind = Tok::Comma; break;
        case ';': t.kind = Tok::Semi; break;
        case ':': t.kind = Tok::Colon; break;
        case '.': t.kind = Tok::Dot; break;
        case '=': t.kind = Tok::Assign; break;
        case '+': t.kind = Tok::Plus; break;
        case '-': t.kind = Tok::Minus; break;
        case '*': t.kind = Tok::Star; break;
        case '/': t.kind = Tok::Slash; break;
        default:
          throw ParseError(std::string("unexpected character '") + c + "'", span(start, i), "token");
      }
    }
    t.span = span(start, i);
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::End;
  end.span = span(src.size(), src.size());
  end.nl_before = true;
  out.push_back(end);
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  StmtPtr program() {
    auto s = stmt_list({Tok::End});
    expect(Tok::End);
    return s;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
  LabelGen labels_;

  const Token& peek(size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at(Tok t) const { return peek().kind == t; }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& expected) {
    const Token& t = peek();
    throw ParseError("expected " + expected + " but found " + tok_name(t.kind), t.span, expected);
  }

  Token expect(Tok t) {
    if (!at(t)) fail(tok_name(t));
    return next();
  }

  Label label(uint32_t start, uint32_t end) { return labels_.fresh(Span{start, end}); }
  uint32_t prev_end() const { return pos_ == 0 ? 0 : toks_[pos_ - 1].span.end; }

  static StmtPtr chain(std::vector<StmtPtr>& items, size_t from, LabelGen& lg) {
    if (from + 1 == items.size()) return items[from];
    auto rest = chain(items, from + 1, lg);
    Span sp{items[from]->label.span.start, rest->label.span.end};
    return mk_seq(lg.fresh(sp), items[from], rest);
  }

  bool is_stop(const std::vector<Tok>& stops) const {
    for (Tok t : stops)
      if (at(t)) return true;
    return false;
  }

  StmtPtr stmt_list(const std::vector<Tok>& stops) {
    std::vector<StmtPtr> items;
    uint32_t start = peek().span.start;
    while (true) {
      while (at(Tok::Semi)) next();
      if (is_stop(stops)) break;
      items.push_back(stmt());
      if (at(Tok::Semi) || is_stop(stops) || peek().nl_before) continue;
      fail("';' or newline");
    }
    if (items.empty()) return mk_stmt(StmtKind::Empty, label(start, start));
    return chain(items, 0, labels_);
  }

  StmtPtr block() {
    expect(Tok::LBrace);
    auto s = stmt_list({Tok::RBrace});
    expect(Tok::RBrace);
    return s;
  }

  std::vector<std::string> params() {
    expect(Tok::LParen);
    std::vector<std::string> ps;
    std::set<std::string> seen;
    if (!at(Tok::RParen)) {
      while (true) {
        Token t = expect(Tok::Ident);
        if (!seen.insert(t.text).second)
          throw ParseError("duplicate parameter " + t.text, t.span, "distinct parameter names");
        ps.push_back(t.text);
        if (!at(Tok::Comma)) break;
        next();
      }
    }
    expect(Tok::RParen);
    return ps;
  }

  // '{' stmts return e '}'
  std::pair<StmtPtr, ExprPtr> fn_body() {
    expect(Tok::LBrace);
    auto body = stmt_list({Tok::Return});
    expect(Tok::Return);
    auto result = expr();
    while (at(Tok::Semi)) next();
    expect(Tok::RBrace);
    return {body, result};
  }

  StmtPtr stmt() {
    uint32_t start = peek().span.start;
    switch (peek().kind) {
      case Tok::Var: {
        next();
        std::string name = expect(Tok::Ident).text;
        expect(Tok::Assign);
        auto init = expr();
        return mk_var_decl(label(start, prev_end()), name, init);
      }
      case Tok::If: {
        next();
        expect(Tok::LParen);
        auto cond = expr();
        expect(Tok::RParen);
        auto thn = block();
        expect(Tok::Else);
        auto els = block();
        auto s = mk_stmt(StmtKind::If, label(start, prev_end()));
        s->expr = cond;
        s->first = thn;
        s->second = els;
        return s;
      }
      case Tok::For: {
        next();
        expect(Tok::LParen);
        expect(Tok::Var);
        std::string name = expect(Tok::Ident).text;
        expect(Tok::In);
        auto iter = expr();
        expect(Tok::RParen);
        auto body = block();
        auto s = mk_stmt(StmtKind::ForIn, label(start, prev_end()));
        s->name = name;
        s->expr = iter;
        s->first = body;
        return s;
      }
      case Tok::While: {
        next();
        expect(Tok::LParen);
        auto cond = expr();
        expect(Tok::RParen);
        auto body = block();
        auto s = mk_stmt(StmtKind::While, label(start, prev_end()));
        s->expr = cond;
        s->first = body;
        return s;
      }
      case Tok::Function:
        if (peek(1).kind == Tok::Ident) {
          next();
          std::string name = next().text;
          auto ps = params();
          auto [body, result] = fn_body();
          auto s = mk_stmt(StmtKind::FunDecl, label(start, prev_end()));
          s->name = name;
          s->params = ps;
          s->first = body;
          s->expr = result;
          return s;
        }
        break;
      default: break;
    }
    auto e = expr();
    return mk_expr_stmt(label(start, prev_end()), e);
  }

  ExprPtr expr() {
    uint32_t start = peek().span.start;
    auto lhs = additive();
    if (!at(Tok::Assign)) return lhs;
    Token eq = next();
    auto rhs = expr();
    Label l = label(start, prev_end());
    switch (lhs->kind) {
      case ExprKind::Var: return mk_assign_var(l, lhs->name, rhs);
      case ExprKind::Prop: return mk_assign_prop(l, lhs->kids[0], lhs->name, rhs);
      case ExprKind::Index: return mk_expr(ExprKind::AssignIndex, l, {lhs->kids[0], lhs->kids[1], rhs});
      default: throw ParseError("invalid assignment target", eq.span, "identifier, property or element");
    }
  }

  ExprPtr binary(int level) {
    uint32_t start = peek().span.start;
    auto lhs = level == 0 ? binary(1) : postfix();
    while (true) {
      ExprKind k;
      if (peek().nl_before) break;
      Tok t = peek().kind;
      if (level == 0 && t == Tok::Plus) k = ExprKind::Add;
      else if (level == 0 && t == Tok::Minus) k = ExprKind::Sub;
      else if (level == 1 && t == Tok::Star) k = ExprKind::Mul;
      else if (level == 1 && t == Tok::Slash) k = ExprKind::Div;
      else break;
      next();
      auto rhs = level == 0 ? binary(1) : postfix();
      lhs = mk_expr(k, label(start, prev_end()), {lhs, rhs});
    }
    return lhs;
  }

  ExprPtr additive() { return binary(0); }

  ExprPtr postfix() {
    uint32_t start = peek().span.start;
    auto e = primary();
    while (true) {
      if (at(Tok::Dot)) {
        next();
        std::string name = expect(Tok::Ident).text;
        e = mk_prop(label(start, prev_end()), e, name);
      } else if (at(Tok::LBracket) && !peek().nl_before) {
        next();
        auto i = expr();
        expect(Tok::RBracket);
        e = mk_expr(ExprKind::Index, label(start, prev_end()), {e, i});
      } else if (at(Tok::LParen) && !peek().nl_before) {
        next();
        std::vector<ExprPtr> kids{e};
        if (!at(Tok::RParen)) {
          while (true) {
            kids.push_back(expr());
            if (!at(Tok::Comma)) break;
            next();
          }
        }
        expect(Tok::RParen);
        e = mk_expr(ExprKind::Call, label(start, prev_end()), std::move(kids));
      } else {
        return e;
      }
    }
  }

  static int64_t parse_int(const Token& t, bool negative) {
    uint64_t limit = negative ? uint64_t(std::numeric_limits<int64_t>::max()) + 1
                              : uint64_t(std::numeric_limits<int64_t>::max());
    uint64_t v = 0;
    for (char c : t.text) {
      uint64_t d = uint64_t(c - '0');
      if (v > (limit - d) / 10) throw ParseError("integer literal out of range", t.span, "64-bit integer");
      v = v * 10 + d;
    }
    if (negative) return v == limit ? std::numeric_limits<int64_t>::min() : -int64_t(v);
    return int64_t(v);
  }

  ExprPtr primary() {
    const Token& t = peek();
    uint32_t start = t.span.start;
    switch (t.kind) {
      case Tok::Int: {
        Token n = next();
        return mk_int(label(start, n.span.end), parse_int(n, false));
      }
      case Tok::Minus:
        if (peek(1).kind == Tok::Int && peek(1).span.start == t.span.end) {
          next();
          Token n = next();
          return mk_int(label(start, n.span.end), parse_int(n, true));
        }
        fail("expression");
      case Tok::Str: {
        Token s = next();
        return mk_str(label(start, s.span.end), s.text);
      }
      case Tok::True:
      case Tok::False: {
        Token b = next();
        return mk_bool(label(start, b.span.end), b.kind == Tok::True);
      }
      case Tok::Null: {
        Token n = next();
        return mk_null(label(start, n.span.end));
      }
      case Tok::Ident: {
        Token id = next();
        return mk_var(label(start, id.span.end), id.text);
      }
      case Tok::LParen: {
        next();
        auto e = expr();
        expect(Tok::RParen);
        return e;
      }
      case Tok::LBrace: {
        next();
        auto e = mk_expr(ExprKind::ObjLit, Label{});
        if (!at(Tok::RBrace)) {
          while (true) {
            e->names.push_back(expect(Tok::Ident).text);
            expect(Tok::Colon);
            e->kids.push_back(expr());
            if (!at(Tok::Comma)) break;
            next();
          }
        }
        expect(Tok::RBrace);
        e->label = label(start, prev_end());
        return e;
      }
      case Tok::LBracket: {
        next();
        auto e = mk_expr(ExprKind::ArrLit, Label{});
        if (!at(Tok::RBracket)) {
          while (true) {
            e->kids.push_back(expr());
            if (!at(Tok::Comma)) break;
            next();
          }
        }
        expect(Tok::RBracket);
        e->label = label(start, prev_end());
        return e;
      }
      case Tok::Function: {
        next();
        auto ps = params();
        auto [body, result] = fn_body();
        auto e = mk_expr(ExprKind::Lambda, label(start, prev_end()), {result});
        e->names = ps;
        e->body = body;
        return e;
      }
      default: fail("expression");
    }
  }
};

int renumber_expr(Expr& e, int next);

int renumber_stmt(Stmt& s, int next) {
  s.label.id = next++;
  if (s.kind == StmtKind::FunDecl) {
    if (s.first) next = renumber_stmt(*s.first, next);
    return renumber_expr(*s.expr, next);
  }
  if (s.expr) next = renumber_expr(*s.expr, next);
  if (s.first) next = renumber_stmt(*s.first, next);
  if (s.second) next = renumber_stmt(*s.second, next);
  return next;
}

int renumber_expr(Expr& e, int next) {
  e.label.id = next++;
  if (e.kind == ExprKind::Lambda) {
    if (e.body) next = renumber_stmt(*e.body, next);
    return renumber_expr(*e.kids[0], next);
  }
  for (auto& k : e.kids) next = renumber_expr(*k, next);
  return next;
}

}  // namespace

int renumber(Stmt& s, int next) { return renumber_stmt(s, next); }

SurfaceProgram parse_program(const std::string& source) {
  Parser p(lex(source));
  SurfaceProgram prog;
  prog.body = p.program();
  prog.next_label = renumber(*prog.body, 0);
  prog.source = source;
  return prog;
}

}  // namespace tsa
