#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "stylo/language.hpp"
#include "stylo/token.hpp"

namespace stylo {

// Fixed 23-type node inventory. The bigram feature space needs stable slots
// across files, so this list never grows per input.
enum class NodeType : std::uint8_t {
  TranslationUnit,
  Function,
  ParameterList,
  Parameter,
  Block,
  If,
  Else,
  Switch,
  Case,
  For,
  While,
  DoWhile,
  Ternary,
  Return,
  Declaration,
  Call,
  Identifier,
  Literal,
  BinaryOp,
  UnaryOp,
  Import,
  Class,
  Other,
};

constexpr std::size_t kNodeTypeCount = 23;
const char* node_type_name(NodeType t);
const std::array<NodeType, kNodeTypeCount>& all_node_types();

struct SyntaxNode {
  NodeType type;
  std::size_t depth = 1;  // root is 1
  std::vector<std::unique_ptr<SyntaxNode>> children;

  explicit SyntaxNode(NodeType t) : type(t) {}

  SyntaxNode* add_child(NodeType t) {
    auto node = std::make_unique<SyntaxNode>(t);
    node->depth = depth + 1;
    children.push_back(std::move(node));
    return children.back().get();
  }
};

struct SyntaxTree {
  std::unique_ptr<SyntaxNode> root;
  std::size_t node_count = 0;
  std::vector<Diagnostic> diagnostics;
};

struct SyntaxMetrics {
  std::size_t max_nesting_depth = 0;
  double avg_branching_factor = 0.0;
  double avg_params_per_function = 0.0;
  double param_count_stddev = 0.0;
  std::size_t max_ast_depth = 0;
  double avg_leaf_depth = 0.0;
  std::array<double, kNodeTypeCount> avg_depth_per_type{};  // 0 for absent types
  std::map<std::pair<NodeType, NodeType>, double> bigram_freq;
  std::map<std::string, double> keyword_freq;
};

// Error-tolerant structural parse: brace/paren matching plus keyword
// anchors. Never fails; unmatched delimiters close at end of scope and are
// reported as diagnostics.
SyntaxTree parse_syntax(const TokenStream& stream, const LanguageProfile& profile);

SyntaxMetrics syntax_metrics(const SyntaxTree& tree, const TokenStream& stream);

// Number of Function nodes the parse recognizes; this is the function count
// the layout metrics use.
std::size_t count_functions(const SyntaxTree& tree);

// Indented text dump, one node per line (debugging aid for the CLI).
std::string dump_tree(const SyntaxTree& tree);

}  // namespace stylo
