#include <gtest/gtest.h>

#include <algorithm>

#include "vfc/error.hpp"
#include "vfc/functions.hpp"
#include "vfc/syntax.hpp"

namespace {

using namespace vfc;
using namespace vfc::syntax;

const StatementEntry& find(const StatementIR& ir, std::string_view prefix) {
  for (const auto& s : ir.statements)
    if (s.text.rfind(prefix, 0) == 0) return s;
  throw std::runtime_error("no statement starting with " + std::string(prefix));
}

TEST(Language, Detection) {
  EXPECT_EQ(language_from_path("x/y.c"), Language::C);
  EXPECT_EQ(language_from_path("y.hpp"), Language::Cpp);
  EXPECT_EQ(language_from_path("y.py"), Language::Unknown);
  EXPECT_EQ(language_from_name("C++"), Language::Cpp);
  EXPECT_FALSE(has_grammar(Language::Unknown));
  EXPECT_THROW(parse_source("x", Language::Unknown), CapabilityError);
}

TEST(Parse, ErrorTolerant) {
  const auto t = parse_source("int f() { return (1 + ; }\nint g(void) { return 2; }\n", Language::C);
  EXPECT_TRUE(t.has_errors());
  const auto fns = list_functions(t);
  EXPECT_TRUE(std::any_of(fns.begin(), fns.end(), [](const auto& f) { return f.name == "g"; }));
}

TEST(Parse, CleanSourceHasNoErrors) {
  const auto t = parse_source("static int f(int a) {\n  if (a) return 1;\n  return 0;\n}\n", Language::C);
  EXPECT_FALSE(t.has_errors());
  EXPECT_EQ(t.count_kind("function_definition"), 1u);
  EXPECT_EQ(t.node(t.root()).span.end, t.source().size());
}

TEST(Functions, NamesSignaturesAndLines) {
  const auto t = parse_source("int a(int x) {\n  return x;\n}\n\nvoid b(void)\n{\n}\n", Language::C);
  const auto fns = list_functions(t);
  ASSERT_EQ(fns.size(), 2u);
  EXPECT_EQ(fns[0].name, "a");
  EXPECT_EQ(fns[0].lines, (LineRange{1, 3}));
  EXPECT_EQ(fns[1].name, "b");
  EXPECT_EQ(fns[1].lines, (LineRange{5, 7}));
}

TEST(Functions, CppQualifiedNames) {
  const auto t = parse_source("namespace n {\nstruct S {\n  int get() { return v; }\n  int v;\n};\n}\n", Language::Cpp);
  const auto fns = list_functions(t);
  ASSERT_EQ(fns.size(), 1u);
  EXPECT_EQ(fns[0].name, "n::S::get");
}

TEST(Comments, StripRemovesBlankedLinesKeepsStrings) {
  const std::string src = "int a; // tail\n/* whole\n line */\nchar *s = \"/* not */\";\n";
  EXPECT_EQ(strip_comments(src, Language::C), "int a;\nchar *s = \"/* not */\";\n");
}

TEST(StatementIR, ReadsWritesAndHeaders) {
  const auto t = parse_source(
      "int f(int *p, int n) {\n"
      "  int s = 0;\n"
      "  for (int i = 0; i < n; i++) {\n"
      "    s += p[i];\n"
      "  }\n"
      "  if (s > 10)\n"
      "    s = 10;\n"
      "  use(&n);\n"
      "  return s;\n"
      "}\n",
      Language::C);
  const auto ir = build_statement_ir(t);
  const auto& decl = find(ir, "int s = 0");
  EXPECT_EQ(decl.writes, (std::set<std::string>{"s"}));
  EXPECT_TRUE(decl.reads.empty());
  const auto& loop = find(ir, "for");
  EXPECT_TRUE(loop.is_control_header);
  EXPECT_TRUE(loop.reads.count("n"));
  const auto& acc = find(ir, "s += p[i]");
  EXPECT_EQ(acc.writes, (std::set<std::string>{"s"}));
  EXPECT_EQ(acc.reads, (std::set<std::string>{"s", "p", "i"}));
  ASSERT_FALSE(acc.enclosure_chain.empty());
  EXPECT_EQ(acc.enclosure_chain.front(), loop.id);
  const auto& clamp = find(ir, "s = 10");
  EXPECT_EQ(ir[clamp.enclosure_chain.front()].text.substr(0, 2), "if");
  EXPECT_TRUE(find(ir, "use(&n)").writes.count("n"));
  EXPECT_EQ(find(ir, "return s").line_begin(), 9);
}

TEST(StatementIR, PreOrderIds) {
  const auto t = parse_source("void f(int a) {\n  if (a) {\n    a = 1;\n  }\n  a = 2;\n}\n", Language::C);
  const auto ir = build_statement_ir(t);
  ASSERT_EQ(ir.size(), 3u);
  for (std::size_t i = 0; i < ir.size(); ++i) EXPECT_EQ(ir.statements[i].id, i);
  EXPECT_EQ(ir.statements[1].line_begin(), 3);
}

TEST(StatementIR, DoWhileHasTwoSegments) {
  const auto t = parse_source("void f(int a) {\n  do {\n    a--;\n  } while (a > 0);\n}\n", Language::C);
  const auto ir = build_statement_ir(t);
  const auto& header = ir.statements.at(0);
  EXPECT_TRUE(header.is_control_header);
  EXPECT_EQ(header.segments.size(), 2u);
  EXPECT_TRUE(header.reads.count("a"));
}

TEST(AnalyzeFile, MissingSnapshotFallsBack) {
  diff::FileDiff fd = diff::compute_unified_diff("int a;\n", "int b;\n");
  fd.old_path = fd.new_path = "x.c";
  EXPECT_EQ(analyze_file(fd, std::nullopt, "int b;\n").fallback, FileFallback::MissingSnapshot);
  fd.old_path = fd.new_path = "x.py";
  EXPECT_EQ(analyze_file(fd, "int a;\n", "int b;\n").fallback, FileFallback::UnsupportedLanguage);
}

TEST(AnalyzeFile, PairsChangedFunctionAndResidual) {
  const std::string pre = "int g = 1;\nint f(void) {\n  return 1;\n}\nint h(void) {\n  return 3;\n}\n";
  const std::string post = "int g = 2;\nint f(void) {\n  return 2;\n}\nint h(void) {\n  return 3;\n}\n";
  diff::FileDiff fd = diff::compute_unified_diff(pre, post);
  fd.old_path = fd.new_path = "x.c";
  const auto a = analyze_file(fd, pre, post);
  ASSERT_EQ(a.functions.size(), 1u);
  EXPECT_EQ(a.functions[0].name, "f");
  EXPECT_EQ(a.residual.size(), 2u);
}

TEST(AnalyzeFile, AddedFunctionIsOneSided) {
  const std::string pre = "int f(void) {\n  return 1;\n}\n";
  const std::string post = pre + "int g(void) {\n  return 2;\n}\n";
  diff::FileDiff fd = diff::compute_unified_diff(pre, post);
  fd.old_path = fd.new_path = "x.c";
  const auto a = analyze_file(fd, pre, post);
  ASSERT_EQ(a.functions.size(), 1u);
  EXPECT_FALSE(a.functions[0].pre_tree.has_value());
  EXPECT_TRUE(a.functions[0].post_tree.has_value());
}

}  // namespace
