/* algebra.hh -- the effective Boolean algebra interface.
 *
 * An algebra instance owns its predicates; predicates of different instances
 * must not be combined (the concrete algebras reject that with usage_error).
 */

#ifndef SAFA_ALGEBRA_HH_
#define SAFA_ALGEBRA_HH_

#include <concepts>
#include <string>

#include <safa/bdd.hh>
#include <safa/interval.hh>

namespace safa
{

template <class A>
concept boolean_algebra = requires(A& alg, const A& calg, const typename A::predicate& p,
                                   typename A::character c) {
	typename A::predicate;
	typename A::character;
	{ calg.top() } -> std::same_as<typename A::predicate>;
	{ calg.bot() } -> std::same_as<typename A::predicate>;
	{ alg.conj(p, p) } -> std::same_as<typename A::predicate>;
	{ alg.disj(p, p) } -> std::same_as<typename A::predicate>;
	{ alg.negate(p) } -> std::same_as<typename A::predicate>;
	{ calg.is_sat(p) } -> std::same_as<bool>;
	{ calg.witness(p) } -> std::same_as<typename A::character>;
	{ calg.member(c, p) } -> std::same_as<bool>;
	{ calg.to_string(p) } -> std::convertible_to<std::string>;
	{ calg.tag() } -> std::convertible_to<std::uint32_t>;
};

static_assert(boolean_algebra<interval_algebra>);
static_assert(boolean_algebra<bv_algebra>);

/// Conjunction-with-negation, the blocking step of minterm enumeration.
template <boolean_algebra A>
typename A::predicate minus(A& alg, const typename A::predicate& a, const typename A::predicate& b)
{
	return alg.conj(a, alg.negate(b));
}

/// Human-readable character.
inline std::string char_to_string(const interval_algebra&, codepoint c) { return std::to_string(c); }
inline std::string char_to_string(const bv_algebra& alg, std::uint64_t c) { return alg.character_to_string(c); }

} // namespace safa

#endif // SAFA_ALGEBRA_HH_
