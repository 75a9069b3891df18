#include "bbmsel/label.hpp"

#include <algorithm>
#include <charconv>

#include "bbmsel/errors.hpp"

namespace bbmsel {

struct Label::Node {
  Node* parent;
  std::uint32_t index;
  std::uint32_t depth;
  std::uint32_t refs;
};

Label::Label(const Label& o) noexcept : node_(o.node_) {
  if (node_) ++node_->refs;
}

Label& Label::operator=(const Label& o) noexcept {
  if (o.node_) ++o.node_->refs;
  release(node_);
  node_ = o.node_;
  return *this;
}

Label& Label::operator=(Label&& o) noexcept {
  if (this != &o) {
    release(node_);
    node_ = o.node_;
    o.node_ = nullptr;
  }
  return *this;
}

Label::~Label() { release(node_); }

void Label::release(Node* n) noexcept {
  // Iterative so that dropping a deep lineage cannot overflow the stack.
  while (n && --n->refs == 0) {
    Node* p = n->parent;
    delete n;
    n = p;
  }
}

Label Label::child(std::uint32_t i) const {
  if (i == 0) throw DomainError("label child index must be >= 1");
  if (node_) ++node_->refs;
  return Label(new Node{node_, i, node_ ? node_->depth + 1 : 1u, 1u});
}

std::size_t Label::depth() const { return node_ ? node_->depth : 0; }

std::uint32_t Label::last() const { return node_ ? node_->index : 0; }

std::vector<std::uint32_t> Label::path() const {
  std::vector<std::uint32_t> out(depth());
  std::size_t k = out.size();
  for (const Node* n = node_; n; n = n->parent) out[--k] = n->index;
  return out;
}

std::string Label::to_string() const {
  std::string s;
  for (auto i : path()) {
    if (!s.empty()) s += '.';
    s += std::to_string(i);
  }
  return s;
}

Label Label::from_path(std::span<const std::uint32_t> path) {
  Label l;
  for (auto i : path) l = l.child(i);
  return l;
}

Label Label::parse(std::string_view s) {
  Label l;
  if (s.empty()) return l;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t end = std::min(s.find('.', pos), s.size());
    std::uint32_t v = 0;
    const auto r = std::from_chars(s.data() + pos, s.data() + end, v);
    if (r.ec != std::errc() || r.ptr != s.data() + end || v == 0)
      throw DomainError("malformed label '" + std::string(s) + "'");
    l = l.child(v);
    pos = end + 1;
  }
  return l;
}

std::strong_ordering operator<=>(const Label& a, const Label& b) {
  using N = Label::Node;
  const N* x = a.node_;
  const N* y = b.node_;
  if (x == y) return std::strong_ordering::equal;
  const std::uint32_t dx = x ? x->depth : 0;
  const std::uint32_t dy = y ? y->depth : 0;
  while (x && x->depth > dy) {
    if (x->parent == y) return std::strong_ordering::greater;
    x = x->parent;
  }
  while (y && y->depth > dx) {
    if (y->parent == x) return std::strong_ordering::less;
    y = y->parent;
  }
  if (x == y) return dx <=> dy;
  // Same depth, distinct: climb until the parents agree.
  while (x->parent != y->parent) {
    x = x->parent;
    y = y->parent;
  }
  if (x->index != y->index) return x->index <=> y->index;
  // Equal indices under distinct nodes: the labels were built independently.
  const auto pa = a.path();
  const auto pb = b.path();
  return std::lexicographical_compare_three_way(pa.begin(), pa.end(), pb.begin(), pb.end());
}

}  // namespace bbmsel
