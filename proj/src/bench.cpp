#include "decor/bench.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "decor/error.hpp"

namespace decor {

namespace {

bool is_name_char(char ch) {
  return !std::isspace(static_cast<unsigned char>(ch)) && ch != '(' && ch != ')' && ch != ',' && ch != '=' && ch != '#';
}

class LineLexer {
 public:
  LineLexer(std::string_view line, std::size_t line_no) : s_(line), line_(line_no) {}

  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_space();
    return pos_ >= s_.size();
  }
  std::string_view name(const char* what) {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < s_.size() && is_name_char(s_[pos_])) ++pos_;
    if (start == pos_) fail(std::string("expected ") + what);
    return s_.substr(start, pos_ - start);
  }
  void expect(char ch) {
    skip_space();
    if (pos_ >= s_.size() || s_[pos_] != ch) fail(std::string("expected '") + ch + "'");
    ++pos_;
  }
  bool accept(char ch) {
    skip_space();
    if (pos_ < s_.size() && s_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }
  std::size_t column() const { return pos_ + 1; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, pos_ + 1); }

 private:
  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::toupper(static_cast<unsigned char>(a[i])) != std::toupper(static_cast<unsigned char>(b[i]))) return false;
  return true;
}

}  // namespace

Circuit parse_bench(std::string_view text, std::string name) {
  Circuit c;
  c.name = std::move(name);
  std::vector<std::size_t> gate_lines;
  std::unordered_map<std::string, std::size_t> port_lines;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    LineLexer lex(line, line_no);
    if (lex.at_end()) {
      if (end == text.size()) break;
      continue;
    }
    std::string_view head = lex.name("net name or INPUT/OUTPUT");
    if (lex.accept('(')) {
      std::string port(lex.name("port name"));
      lex.expect(')');
      if (!lex.at_end()) lex.fail("unexpected text after declaration");
      if (iequals(head, "INPUT")) {
        (is_key_port_name(port) ? c.key_inputs : c.inputs).push_back(port);
        port_lines.emplace(port, line_no);
      } else if (iequals(head, "OUTPUT")) {
        c.outputs.push_back(port);
        port_lines.emplace("OUTPUT " + port, line_no);
      } else {
        throw ParseError("unknown declaration '" + std::string(head) + "'", line_no, 1);
      }
    } else {
      Gate g;
      g.output = std::string(head);
      lex.expect('=');
      const std::size_t kind_col = lex.column();
      std::string_view kind_text = lex.name("gate kind");
      auto kind = parse_gate_kind(kind_text);
      if (!kind) throw ParseError("unknown gate kind '" + std::string(kind_text) + "'", line_no, kind_col);
      g.kind = *kind;
      lex.expect('(');
      if (!lex.accept(')')) {
        do {
          g.fanin.emplace_back(lex.name("fan-in net"));
        } while (lex.accept(','));
        lex.expect(')');
      }
      if (!lex.at_end()) lex.fail("unexpected text after gate");
      c.gates.push_back(std::move(g));
      gate_lines.push_back(line_no);
    }
    if (end == text.size()) break;
  }

  auto diags = check_well_formed(c, gate_lines);
  if (!diags.empty()) {
    const Diagnostic& d = diags.front();
    std::size_t line = d.line;
    if (line == 0) {
      if (auto it = port_lines.find(d.net); it != port_lines.end()) line = it->second;
      else if (auto jt = port_lines.find("OUTPUT " + d.net); jt != port_lines.end()) line = jt->second;
    }
    throw ParseError(d.message, line, 0);
  }
  return c;
}

std::string write_bench(const Circuit& c) {
  std::ostringstream out;
  if (!c.name.empty()) out << "# " << c.name << "\n";
  out << "# " << c.inputs.size() << " inputs, " << c.key_inputs.size() << " key inputs, " << c.outputs.size()
      << " outputs, " << c.gates.size() << " gates\n";
  for (const auto& n : c.inputs) out << "INPUT(" << n << ")\n";
  for (const auto& n : c.key_inputs) out << "INPUT(" << n << ")\n";
  for (const auto& n : c.outputs) out << "OUTPUT(" << n << ")\n";
  const std::string* anchor = nullptr;
  if (!c.inputs.empty()) anchor = &c.inputs.front();
  else if (!c.key_inputs.empty()) anchor = &c.key_inputs.front();
  for (const Gate& g : c.gates) {
    if (is_constant(g.kind)) {
      if (anchor == nullptr) throw CircuitError("cannot emit constant " + g.output + " in a circuit without inputs");
      out << g.output << " = " << (g.kind == GateKind::Const0 ? "XOR" : "XNOR") << "(" << *anchor << ", " << *anchor
          << ")\n";
      continue;
    }
    out << g.output << " = " << to_string(g.kind) << "(";
    for (std::size_t i = 0; i < g.fanin.size(); ++i) {
      if (i) out << ", ";
      out << g.fanin[i];
    }
    out << ")\n";
  }
  return out.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("write failed for " + path.string());
}

Circuit read_bench_file(const std::filesystem::path& path) {
  return parse_bench(read_text_file(path), path.stem().string());
}

}  // namespace decor
