#include "termxform/prelude.hpp"

#include <algorithm>
#include <charconv>

#include "termxform/xml.hpp"

namespace termxform {

namespace {

// The rule base every program starts from. Changes against the published
// rule set are marked in place.
constexpr std::string_view kPrelude = R"PRELUDE(
% ---------------------------------------------------------------------------
% Library list predicates.

append([],L,L).
append([H|T],L,[H|R]):-append(T,L,R).

member(X,[X|_]).
member(X,[_|T]):-member(X,T).

% ---------------------------------------------------------------------------
% Internal rules.

traverse(pi(_),[]):-!.
traverse(comment(_),[]):-!.
traverse(X,Res):-template(X,Res), !.
traverse(element(_,_,L),Res):-
  traverseElements(L,Res).
% Text no template matched: dropped or copied depending on solver options.
traverse(text(T),Res):-'$unmatched_text'(T,Res).

traverseElements([],[]).
traverseElements([H|T],Res):-
  not(list(H)), compound(H), !,
  traverse(H,Res1),
  traverseElements(T,Res2),
  append(Res1,Res2,Res).
% Entries that are not nodes contribute nothing.
traverseElements([_|T],Res):-
  traverseElements(T,Res).

% ---------------------------------------------------------------------------
% Transformation operators.

:-op(100,yfx,'/').
transform(E1 / Child,element(Child,A,C)):-
  E1=element(Name,AttList,Children),
  append(_,[(element(Child,A,C))|_],
         Children).
transform(X / Child,Y):-transform(X,X2),
  transform(X2 / Child,Y).

% Descendant-or-self in document order: the node itself, then each child
% subtree in turn.
:-op(100,yfx,'^').
transform(_ ^ Name,_):-
  (var(Name);list(Name)), !, fail.
transform(element(Name,A,C) ^ Name,
          element(Name,A,C)).
transform(element(_,_,C) ^ Name,X):-
  member(H,C), compound(H),
  transform(H ^ Name,X).
transform(X ^ Name,Y):-
  transform(X,X2),
  transform(X2 ^ Name,Y).

:-op(100,yfx,'@').
transform(element(_,AttList,_) @ Att,X):-
  append(_,[A|_],AttList),
  atom_codes(Att,AttCodes),
  atom_codes(A,ACodes),
  append(Pre,[61,34|X2],ACodes),
  append(X3,[34],X2),
  Pre=AttCodes, !, atom_codes(X,X3).
transform(X @ Att, Y):-
  transform(X,X2),
  transform(X2 @ Att, Y).

:-op(100,fy,atts).
transform(atts element(_,L,_),Y):-
  not(list(L)), !, fail.
transform(atts element(_,L,_),_):-
  findall(X,selectattribute(X,L),[]),
  !, fail.
transform(atts element(_,L,_),Y):-
  findall(X,selectattribute(X,L),Y).
transform(atts E,Y):-
  transform(E,E2),
  transform(atts E2,Y).

:-op(100,yfx,'?').
transform(X ? Att1):-
  atom(Att1), transform(atts X,X2),
  member(Att1,X2).

:-op(100,yfx,id).
transform(X id S,Attrib):-
  X=element(_,AL,_),
  transform(atts X,AttribNames),
  member(Attrib,AttribNames),
  transform(X @ Attrib,S).
transform(X id S,Id):-
  transform(X,X2),
  transform(X2 id S,Id).

:-op(100,yfx,'#').
transform(element(_,_,L) # N,Y):-
  integer(N), N>=1,
  findall(X,member(text(X),L),Z),
  nth(N,Z,Y).
transform(X # N,Y):-
  transform(X,X2), transform(X2 # N,Y).

transform(element(_,_,L) ? N,Y):-
  integer(N), N>=1,
  findall(X,member(pi(X),L),Z),
  nth(N,Z,Y).
transform(X ? N,Y):-
  transform(X,X2),
  transform(X2 ? N,Y).

:-op(100,yfx,'c').
transform(element(_,_,L) c N,Y):-
  integer(N), N>=1,
  findall(X,member(comment(X),L),Z),
  nth(N,Z,Y).
transform(X c N,Y):-
  transform(X,X2),
  transform(X2 c N,Y).

:-op(100,yfx,sort).
transform(element(N,A,L)
          sort AttName,
          element(N,A,Y)):-
  extendStructure(L2,AttName,L),
  quicksort(L2,leAttributes,L3),
  extendStructure(L3,AttName,Y).

:-op(100,fy,sortbyName).
transform(sortbyName element(N,A,L),
          element(N,A,Y)):-
  quicksort(L,le,Y).

:-op(100,fy,child).
transform(child element(_,_,C),Y):-
  member(Y,C).
transform(child X,Y):-
  transform(X,X2),
  transform(child X2,Y).

:-op(100,fy,descendant).
transform(descendant X,Y):-
  transform(child X,Y).
transform(descendant X,Y):-
  transform(child X,Y2),
  transform(descendant Y2,Y).

:-op(100,fy,copy).
transform(copy element(N,_,_),
          element(N,[],[])).
transform(copy text(T),text(T)).
transform(copy comment(C),
          comment(C)).
transform(copy pi(P),pi(P)).
transform(copy X,Y):-
  transform(X,X2),
  transform(copy X2,Y).

:-op(100,fy,copy_of).
transform(copy_of X,X):-
  X=element(_,_,_);
  X=text(_);
  X=comment(_); X=pi(_).
transform(copy_of X,Y):-transform(X,Y).

:-op(100,yfx,level).
transform(Tree level Node,Y):-
  level1(Tree,Node,Y).
transform(Tree level Node,Y):-
  transform(Tree,Tree2),
  transform(Node,Node2),
  level1(Tree2,Node2,Y).

:-op(100,fy,last).
transform(last element(_,_,C),Y):-
  last(C,Y).
transform(last X,Y):-
  transform(X,X2),
  transform(last X2,Y).

:-op(100,fy,count).
transform(count element(_,_,C),Len):-
  length(C,Len).
transform(count X,Y):-
  transform(X,X2),
  transform(count X2,Y).

:-op(100,fy,name).
transform(name element(Name,_,_),_):-
  (var(Name);list(Name)), !, fail.
transform(name element(Name,_,_),Name).
transform(name X,Y):-
  transform(X,X2),
  transform(name X2,Y).

:-op(100,fy,distinct).
transform(distinct element(N,A,L),
          element(N,A,Z)):-
  reverse(L,L2),
  removeDuplicates(L2,L3),
  reverse(L3,Z).

% ---------------------------------------------------------------------------
% Non-monotone predicates.

removeElement(element(N,As,L),
              Name,element(N,As,L2)):-
  delete(element(Name,_,_),L,L2).

remove(element(N,As,L),Node,
       element(N,As,L2)):-
  delete(Node,L,L2).

% Only the first attribute with the given identifier is removed.
removeAttribute(E,Att,element(N,As2,L)):-
  E=element(N,As,L),
  transform(E @ Att,Val),
  atom_codes(Att,AttCodes),
  atom_codes(Val,ValCodes),
  append(AttCodes,[61,34|ValCodes],Res2),
  append(Res2,[34],Res),
  atom_codes(Selected,Res),
  append(Pre,[Selected|Post],As), !,
  append(Pre,Post,As2).

% The anchor guard lets integers through so the position clause is reachable.
insertBefore(_,_,RecentNode,_):-
  (var(RecentNode);
   list(RecentNode);
   atom(RecentNode)),
  !, fail.
insertBefore(_,NewNode,_,_):-
  (var(NewNode);
   list(NewNode);
   number(NewNode);
   atom(NewNode)),
  !, fail.
insertBefore(E1,NewNode,RecentNode,
             element(N,A,List2)):-
  E1=element(N,A,List),
  compound(RecentNode),
  !, compound(NewNode),
  append(Pre,[RecentNode|Post],List),
  append(Pre,[NewNode,RecentNode|Post],
         List2).
insertBefore(E1,NewNode,Position,
             element(N,A,List2)):-
  E1=element(N,A,List),
  integer(Position),
  !, Position>=1,
  P0 is Position-1, length(Pre,P0),
  append(Pre,[X|Post],List),
  append(Pre,[NewNode,X|Post],List2).

insertAfter(_,_,RecentNode,_):-
  (var(RecentNode); list(RecentNode);
   atom(RecentNode)),
  !, fail.
insertAfter(_,NewNode,_,_):-
  (var(NewNode); list(NewNode);
   number(NewNode); atom(NewNode)),
  !, fail.
insertAfter(E1,NewNode,RecentNode,
    element(N,A,List2)):-
  E1=element(N,A,List),
  compound(RecentNode), !,
  append(Pre,[RecentNode|Post],List),
  append(Pre,[RecentNode,NewNode|Post],
         List2).
insertAfter(E1,NewNode,Position,
            element(N,A,List2)):-
  E1=element(N,A,List), integer(Position),
  !,
  Position>=1,
  P0 is Position-1, length(Pre,P0),
  append(Pre,[X|Post],List),
  append(Pre,[X,NewNode|Post],List2).

% ---------------------------------------------------------------------------
% Protected helper predicates.

level1(Tree,Node,Result):-
  level0(Tree,Node,[],Result).

level0(element(_,_,Children),Y,Res0,Res):-
  nth(N,Children,Y), Res=[N|Res0].
level0(element(N,A,[H|T]),Y,Res0,Res):-
  level0(H,Y,Res0,Res1),
  Res=[1|Res1];
  levels0([H|T],T,Y,Res0,Res).

levels0(L,[H|T],Y,Res0,Res):-
  level0(H,Y,Res0,Res1),
  nth(N,L,H), Res=[N|Res1];
  levels0(L,T,Y,Res0,Res).

nth0(s(zero),[X|_],X).
nth0(s(M),[_|L],X):-nth0(M,L,X).

selectattribute(_,L):-
  (var(L);number(L);
   atom(L), not(list(L))),
  !, fail.
selectattribute(X,List):-
  member(Y,List),
  atom_codes(Y,YCodes2),
  append(X2,[61,34|YCodes],YCodes2),
  append(_,[34],YCodes), atom_codes(X,X2).

removeDuplicates(L1,L2):-not(list(L1)),
  !, fail.
removeDuplicates([],[]).
removeDuplicates([H|T],T2):-
  member(H,T),
  removeDuplicates(T,T2).
removeDuplicates([H|T],[H|T2]):-
  not(member(H,T)),
  removeDuplicates(T,T2).

lexicalle([],[]).
lexicalle([],[H2|_]).
lexicalle([H|_],[]):-fail.
lexicalle([H|_],[H2|_]):-
  nonvar(H), nonvar(H2), H>H2, fail.
lexicalle([H|T],[H2|T2]):-
  nonvar(H), nonvar(H2), H=H2,
  lexicalle(T,T2), !.
lexicalle([H|T],[H2|T2]):-
  var(H), var(H2), !, fail.
lexicalle([H|_],[H2|_]):-
  nonvar(H), nonvar(H2), H<H2, !.
lexicalle([H|T],[H2|T2]):-
  H=H2, lexicalle(T,T2), !.

le(element(N,_,_),element(N2,_,_)):-
  atom(N), not(list(N)),
  atom(N2), not(list(N2)),
  atom_codes(N,NCodes),
  atom_codes(N2,N2Codes),
  lexicalle(NCodes,N2Codes).

ge(X,Y):-le(Y,X).

concat0([],X,X).
concat0([H|T],X,Y):-list(H),
  append(X,H,X2), concat0(T,X2,Y).

extendStructure([],_,[]).
extendStructure(L,_,L2):-
  not(ground(L)),
  not(ground(L2)), !, fail.
extendStructure([E1|T2],Extension,[E2|T]):-
  E1=element(N,A,C,Extension),
  extendStructure(T2,Extension,T),
  E2=element(N,A,C).

checkSerializable(pi(_)):-!.
checkSerializable(comment(_)):-!.
checkSerializable(text(_)):-!.
checkSerializable(element(N,A,C)):-
  not(list(N)), atom(N),
  checkAttributes(A),
  checkSerializables(C), !.
checkSerializable(X):-
  write('\nError: '), write(X),
  write(' was not expected here!'), fail.

checkSerializables([]).
checkSerializables([H|T]):-
  checkSerializable(H),
  checkSerializables(T).

checkAttributes([]):-!.
checkAttributes([H|T]):-
  atom_codes(H,HCodes),
  append(_,[61,34|HCodes1],HCodes),
  append(_,[34],HCodes1),
  checkAttributes(T), !.
checkAttributes(X):-
  write('\nError in remaining attributes list: '),
  write(X), fail.

% ---------------------------------------------------------------------------
% Helper predicates.

sum([],0).
sum([H|T],X):-sum(T,X2), X is X2+H.

last([_|T],L):-last(T,L).
last([H],H).

nth(N,L,E):-
  var(N), nth0(N1,L,E), church(N1,N).
nth(N,L,E):-
  church(N1,N), nth0(N1,L,E).

concat(L,X):-concat0(L,[],X).

church(zero,0):-!.
church(s(X),N):-
  var(N),
  church(X,N1),
  N is N1+1.
church(s(X),N):-
  not(var(N)),
  N1 is N-1,
  church(X,N1).

leAttributes(element(N,AL1,_,Att1),
             element(N2,AL2,_,Att1)):-
  transform(element(_,AL1,_) @ Att1,A1),
  transform(element(_,AL2,_) @ Att1,A2),
  atom_codes(A1,E1Codes),
  atom_codes(A2,E2Codes),
  lexicalle(E1Codes,E2Codes).

leStrings(S1,S2):-
  atom(S1),
  not(list(S1)),
  atom(S2),
  not(list(S2)),
  atom_codes(S1,S1Codes),
  atom_codes(S2,S2Codes),
  lexicalle(S1Codes,S2Codes).

checkSerializable0(element(N,A,C)):-
  checkSerializable(element(N,A,C)), !.
checkSerializable0(X):-
  write('\nError: element()-constructor was expected, but '),
  write(X),
  write(' was found!'),
  fail.

concat(E1,E2,A1):-var(A1),
  A1 is cat(E1,E2).
concat(E1,E2,A1):-var(E1),
  atom_codes(E2,E2Codes),
  atom_codes(A1,A1Codes),
  append(E1Codes,E2Codes,A1Codes),
  atom_codes(E1,E1Codes).
concat(E1,E2,A1):-var(E2),
  atom_codes(E1,E1Codes),
  atom_codes(A1,A1Codes),
  append(E1Codes,E2Codes,A1Codes),
  atom_codes(E2,E2Codes).

printTree(text(T),T):-
  !, atom(T), not(list(T)).
printTree(comment(_),'').
printTree(pi(_),'').
printTree(element(_,_,Children),Res):-
  printChildren(Children,Res), !.

printChildren([],'').
printChildren([H|T],Res):-
  printTree(H,Res1),
  printChildren(T,Res2),
  Res is cat(Res1,Res2).

flatten(X,_):-
  (var(X);list(X);number(X)),
  !, fail.
flatten(element(N,A,L),
        [element(N,A,[])|T2]):-
  !, flattenList(L,T2).
flatten(X,[X]):-
  X=text(_);X=pi(_);X=comment(_).

flattenList([],[]).
flattenList([H|T],L):-
  flatten(H,L1),
  !, flattenList(T,L2), append(L1,L2,L).

nodes(X,_):-
  (var(X);list(X);number(X)),
  !, fail.
nodes(element(N,A,L),
      [element(N,A,L)|T2]):-
  !, nodesList(L,T2), !.
nodes(X,[X]):-
  X=text(_);
  X=pi(_);
  X=comment(_).

nodesList([],[]).
nodesList([H|T],L):-
  nodes(H,L1),
  nodesList(T,L2),
  append(L1,L2,L).

% Stable quicksort parameterised by a comparison predicate P, where
% call(P,A,B) means A may stay before B.
quicksort([],_,[]).
quicksort([H|T],P,S):-
  partition(T,H,P,L1,L2),
  quicksort(L1,P,S1),
  quicksort(L2,P,S2),
  append(S1,[H|S2],S).

partition([],_,_,[],[]).
partition([X|T],H,P,L1,[X|L2]):-
  call(P,H,X), !,
  partition(T,H,P,L1,L2).
partition([X|T],H,P,[X|L1],L2):-
  partition(T,H,P,L1,L2).
)PRELUDE";

void prepare(Program& p) {
  p.consult(kPrelude);
  p.declare("template", 2);
}

std::optional<std::int64_t> integer_text(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string id_of(const Term& a) {
  std::optional<AttributeEntry> e;
  if (a.is_atom()) e = split_attribute(a.name());
  if (!e) throw ValidationError({}, "malformed attribute entry " + render_term(a));
  return e->id;
}

}  // namespace

std::string_view prelude_source() { return kPrelude; }

void load_prelude(Program& p) {
  Program q;
  prepare(q);
  for (const auto& key : p.predicates()) {
    for (const auto& c : *p.clauses(key.first, key.second)) q.add(c);
  }
  for (const auto& d : p.declared()) q.declare(d.first, d.second);
  q.operators() = p.operators();
  p = std::move(q);
}

Program make_program(std::string_view user_rules) {
  Program p;
  prepare(p);
  p.consult(user_rules);
  return p;
}

std::vector<Term> canon(const std::vector<Term>& attrs) {
  std::vector<std::pair<std::string, Term>> keyed;
  keyed.reserve(attrs.size());
  for (const auto& a : attrs) keyed.emplace_back(id_of(a), a);
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<Term> out;
  out.reserve(keyed.size());
  for (auto& [k, a] : keyed) out.push_back(a);
  return out;
}

Term canon_list(const Term& attrs) {
  auto items = list_items(attrs);
  if (!items) throw ValidationError({}, "attribute list expected, got " + render_term(attrs));
  return Term::list(canon(*items));
}

bool equals(const Term& a, const Term& b) {
  if (is_element(a) && is_element(b)) {
    if (!term_equal(a.arg(0), b.arg(0))) return false;
    auto aa = list_items(a.arg(1));
    auto ba = list_items(b.arg(1));
    if (!aa || !ba) return false;
    try {
      if (!term_equal(Term::list(canon(*aa)), Term::list(canon(*ba)))) return false;
    } catch (const ValidationError&) {
      if (!term_equal(a.arg(1), b.arg(1))) return false;
    }
    auto ac = list_items(a.arg(2));
    auto bc = list_items(b.arg(2));
    if (!ac || !bc || ac->size() != bc->size()) return false;
    for (std::size_t i = 0; i < ac->size(); ++i) {
      if (!equals((*ac)[i], (*bc)[i])) return false;
    }
    return true;
  }
  return term_equal(a, b);
}

std::vector<Term> tree_to_relation(const Term& doc) {
  if (!is_element(doc) || !doc.arg(0).is_atom()) {
    throw Error("tree_to_relation: element expected, got " + render_term(doc));
  }
  const std::string relation = doc.arg(0).name();
  auto kids = list_items(doc.arg(2));
  if (!kids) throw Error("tree_to_relation: child list is not a proper list");
  std::vector<Term> facts;
  std::optional<std::vector<std::string>> schema;
  std::size_t index = 0;
  for (const auto& k : *kids) {
    const std::size_t i = index++;
    if (!is_element(k)) continue;
    auto attrs = list_items(k.arg(1));
    if (!attrs) throw Error("tree_to_relation: child " + std::to_string(i) + " has no attribute list");
    std::vector<Term> sorted = canon(*attrs);
    std::vector<std::string> ids;
    std::vector<Term> args;
    for (const auto& a : sorted) {
      auto e = split_attribute(a.name());
      ids.push_back(e->id);
      if (auto n = integer_text(e->value)) {
        args.push_back(Term::integer(*n));
      } else {
        args.push_back(Term::atom(e->value));
      }
    }
    if (!schema) {
      schema = ids;
    } else if (*schema != ids) {
      std::string have;
      for (const auto& s : ids) have += (have.empty() ? "" : ",") + s;
      std::string want;
      for (const auto& s : *schema) want += (want.empty() ? "" : ",") + s;
      throw Error("tree_to_relation: child " + std::to_string(i) + " has attributes {" + have +
                  "} but the first row has {" + want + "}");
    }
    facts.push_back(Term::compound(relation, std::move(args)));
  }
  return facts;
}

void add_facts(Program& p, const std::vector<Term>& facts) {
  for (const auto& f : facts) {
    Clause c;
    c.head = f;
    p.add(std::move(c));
  }
}

}  // namespace termxform
