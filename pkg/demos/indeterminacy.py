"""
When attributes are missing
===========================

If a target cannot be evaluated, the standard semantics treats the policy as
not applicable.  The indeterminacy semantics instead tracks every decision
the policy might have reached, as a set.
"""

from ptacl4.interop import XacmlDecision as X, combine_kand, combine_kand_fold, parse_policy, parse_request
from ptacl4.policy import eval_policy, eval_policy_ind, format_set, resolve

policy = parse_policy("""
(op kor
    (atomic (target (role admin)) 1)
    (scope (target (dept eng)) (atomic (target) 0)))
""")

for text in ("role=admin\ndept=ops", "role=!\ndept=eng", "dept=!"):
    q = parse_request(text)
    s = eval_policy_ind(policy, q)
    print(
        text.replace("\n", "; ").ljust(22),
        "standard:", eval_policy(policy, q).token.ljust(4),
        "possible:", format_set(s).ljust(12),
        "deny-by-default:", resolve(s, "deny-by-default").token,
    )

# The XACML-style combining algorithm for kand is a fold of kand from top.
for children in ([X.PERMIT, X.CONFLICT], [X.PERMIT, X.DENY], []):
    names = [c.value for c in children]
    print(names, "->", combine_kand(children).value, "/", combine_kand_fold(children).value)
