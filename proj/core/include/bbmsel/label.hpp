#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bbmsel {

/**
 * Ulam-Harris label stored as a shared parent-linked path.
 *
 * Children share their ancestors' nodes, so a population of labels costs
 * memory proportional to its genealogical tree, not to depth times size.
 * Reference counts are not atomic: a label must stay on one thread.
 */
class Label {
 public:
  Label() = default;
  Label(const Label& o) noexcept;
  Label(Label&& o) noexcept : node_(o.node_) { o.node_ = nullptr; }
  Label& operator=(const Label& o) noexcept;
  Label& operator=(Label&& o) noexcept;
  ~Label();

  /// Label of child i (1-based) of this label.
  Label child(std::uint32_t i) const;
  std::size_t depth() const;
  std::uint32_t last() const;
  std::vector<std::uint32_t> path() const;
  bool is_root() const { return node_ == nullptr; }

  /// Dot-separated indices; the root prints as the empty string.
  std::string to_string() const;
  static Label from_path(std::span<const std::uint32_t> path);
  static Label parse(std::string_view s);

  /// Lexicographic order; a proper prefix sorts first.
  friend std::strong_ordering operator<=>(const Label& a, const Label& b);
  friend bool operator==(const Label& a, const Label& b) { return (a <=> b) == 0; }

 private:
  struct Node;
  explicit Label(Node* n) : node_(n) {}
  static void release(Node* n) noexcept;
  Node* node_ = nullptr;
};

}  // namespace bbmsel
