#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "equivar/ast.hpp"

namespace equivar {

// Name resolution over a (mutable) program. Every identifier occurrence is
// either attached to a declaration or recorded as free. Site/ref slots are
// raw pointers into the tree so renaming passes can rewrite names in place;
// they are invalidated by any structural edit to the program.
struct ScopeAnalysis {
  struct Decl {
    std::string name;
    bool isParam = false;
    bool isFunctionName = false;
    bool topLevel = false;               // declared directly at program scope
    std::vector<std::string*> sites;     // declaration-site name slots
    std::vector<std::string*> refs;      // resolved identifier expressions
  };

  std::vector<Decl> decls;
  std::set<std::string> freeNames;
  std::set<std::string> allNames;        // every identifier name seen

  std::map<const Declarator*, int> declaratorIndex;
  std::map<const Stmt*, int> functionDeclIndex;

  int useCount(int declIdx) const { return static_cast<int>(decls[declIdx].refs.size()); }
};

ScopeAnalysis analyzeScopes(Program& prog);

}  // namespace equivar
