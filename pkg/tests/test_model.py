"""Model invariants, validation, and delta application."""

from __future__ import annotations

import pytest

from monolift.deltas import (
    add_attribute,
    add_edge,
    add_entity,
    apply_delta,
    apply_deltas,
    mark_read_only,
    remove_edge,
    remove_entity,
    remove_foreign_key,
    retag_edge,
    set_table_owner_hint,
)
from monolift.errors import (
    DeltaSequenceError,
    DuplicateIdError,
    IllegalDeltaError,
    MissingTargetError,
)
from monolift.model import (
    ArchModel,
    CallEdge,
    CodeClass,
    Column,
    DataAccessEdge,
    EdgeSet,
    ForeignKey,
    GeneratedEntity,
    MethodDecl,
    Table,
    TypeUseEdge,
    validate_model,
)

from conftest import load_fixture
from modelgen import generate


def small_model() -> ArchModel:
    return ArchModel(
        classes=(CodeClass(id="A", name="Alpha"), CodeClass(id="B", name="Beta")),
        methods=(
            MethodDecl(id="A.run", owner_class_id="A", name="run"),
            MethodDecl(id="B.work", owner_class_id="B", name="work"),
        ),
        tables=(Table(id="t", name="things", columns=(Column("id", "long"), Column("name", "string"))),),
        edges=EdgeSet(calls=(CallEdge(id="c", caller_method_id="A.run", callee_method_id="B.work"),)),
        orm_links=(("A", "t"),),
    )


class TestValidation:
    def test_fixture_f1_is_valid(self):
        model, _ = load_fixture("f1")
        assert validate_model(model) == []

    def test_empty_model_is_valid(self):
        assert validate_model(ArchModel()) == []

    def test_call_edge_to_missing_method_names_the_id(self):
        model = ArchModel(
            classes=(CodeClass(id="A", name="Alpha"),),
            methods=(MethodDecl(id="A.run", owner_class_id="A", name="run"),),
            edges=EdgeSet(calls=(CallEdge(id="c", caller_method_id="A.run", callee_method_id="m99"),)),
        )
        report = validate_model(model)
        assert len(report) == 1
        assert "m99" in report[0].message

    def test_duplicate_id_across_kinds(self):
        model = ArchModel(
            classes=(CodeClass(id="x", name="X"),),
            tables=(Table(id="x", name="xs", columns=(Column("id", "long"),)),),
        )
        assert any(v.rule == "unique-id" for v in validate_model(model))

    def test_fk_column_must_exist(self):
        model = ArchModel(
            tables=(
                Table(id="a", name="a", columns=(Column("id", "long"),)),
                Table(id="b", name="b", columns=(Column("id", "long"),)),
            ),
            foreign_keys=(ForeignKey(id="fk", from_table_id="a", from_columns=("nope",),
                                     to_table_id="b", to_columns=("id",)),),
        )
        assert any(v.rule == "fk-columns" for v in validate_model(model))

    def test_write_to_read_only_table_is_invalid(self):
        model = ArchModel(
            classes=(CodeClass(id="A", name="A"),),
            tables=(Table(id="t", name="t", columns=(Column("id", "long"),), read_only=True),),
            edges=EdgeSet(data_access=(DataAccessEdge(id="d", accessor_class_id="A",
                                                      table_id="t", columns=("id",), mode="write"),)),
        )
        assert any(v.rule == "data-access-readonly" for v in validate_model(model))

    def test_wildcard_must_stand_alone(self):
        model = ArchModel(
            classes=(CodeClass(id="A", name="A"),),
            tables=(Table(id="t", name="t", columns=(Column("id", "long"),)),),
            edges=EdgeSet(data_access=(DataAccessEdge(id="d", accessor_class_id="A",
                                                      table_id="t", columns=("*", "id")),)),
        )
        assert any(v.rule == "data-access-columns" for v in validate_model(model))

    def test_generated_payload_keys_required(self):
        model = ArchModel(generated=(GeneratedEntity(id="g", kind="api_endpoint",
                                                     name="E", owner_service="s"),))
        assert any(v.rule == "generated-payload" for v in validate_model(model))

    def test_duplicate_call_pair(self):
        base = small_model()
        duped = base.replace(edges=base.edges.replace(calls=base.edges.calls + (
            CallEdge(id="c2", caller_method_id="A.run", callee_method_id="B.work"),)))
        assert any(v.rule == "call-duplicate" for v in validate_model(duped))

    def test_random_corpus_is_valid(self):
        for seed in range(40):
            model, _ = generate(seed)
            assert validate_model(model) == []


class TestDeltas:
    def test_remove_foreign_key_empties_fk_set(self, f2):
        model, _ = f2
        after = apply_delta(model, remove_foreign_key("fk:orders.customer_id"))
        assert after.foreign_keys == ()
        assert model.foreign_keys != ()  # input untouched

    def test_add_then_remove_is_identity(self):
        model = small_model()
        cls = CodeClass(id="C", name="Gamma")
        roundtrip = apply_delta(apply_delta(model, add_entity("class", cls)), remove_entity("C"))
        assert roundtrip == model

    def test_remove_foreign_key_twice_is_missing_target(self, f2):
        model, _ = f2
        once = apply_delta(model, remove_foreign_key("fk:orders.customer_id"))
        with pytest.raises(MissingTargetError):
            apply_delta(once, remove_foreign_key("fk:orders.customer_id"))

    def test_remove_foreign_key_on_non_fk_is_illegal(self, f2):
        model, _ = f2
        with pytest.raises(IllegalDeltaError):
            apply_delta(model, remove_foreign_key("orders"))

    def test_add_existing_id_is_duplicate(self):
        model = small_model()
        with pytest.raises(DuplicateIdError):
            apply_delta(model, add_entity("class", CodeClass(id="A", name="Again")))

    def test_add_attribute(self):
        model = small_model()
        after = apply_delta(model, add_attribute("A", "betaId"))
        assert "betaId" in after.class_by_id("A").scalar_attributes

    def test_set_owner_hint_and_mark_read_only(self):
        model = small_model()
        after = apply_delta(model, set_table_owner_hint("t", "svc"))
        assert after.table_by_id("t").owner_hint == "svc"
        after = apply_delta(after, mark_read_only("t"))
        assert after.table_by_id("t").read_only

    def test_retag_edge_rejects_unknown_field(self):
        model = small_model()
        model = apply_delta(model, add_edge("data_access", DataAccessEdge(
            id="d", accessor_class_id="A", table_id="t", columns=("id",))))
        with pytest.raises(IllegalDeltaError):
            apply_delta(model, retag_edge("d", {"accessor_class_id": "B"}))

    def test_remove_entity_with_dangling_edges_fails(self):
        model = small_model()
        with pytest.raises(IllegalDeltaError):
            apply_delta(model, remove_entity("B.work"))

    def test_delta_leaving_model_invalid_is_rejected(self):
        model = small_model()
        bad = TypeUseEdge(id="tu", user_class_id="A", used_class_id="missing", kind="attribute")
        with pytest.raises(IllegalDeltaError):
            apply_delta(model, add_edge("type_uses", bad))


class TestDeltaSequences:
    def test_empty_sequence_is_identity(self):
        model = small_model()
        assert apply_deltas(model, []) == model

    def test_fk_move_sequence_reaches_expected_state(self, f2):
        model, _ = f2
        deltas = [remove_foreign_key("fk:orders.customer_id"), add_attribute("Order", "customerId")]
        after = apply_deltas(model, deltas)
        assert after.foreign_keys == ()
        assert "customerId" in after.class_by_id("Order").scalar_attributes

    def test_failure_mid_sequence_reports_index_and_preserves_input(self):
        model = small_model()
        deltas = [
            add_attribute("A", "first"),
            remove_entity("does-not-exist"),
            add_attribute("A", "second"),
        ]
        before = model
        with pytest.raises(DeltaSequenceError) as err:
            apply_deltas(model, deltas)
        assert err.value.index == 1
        assert model == before
        # brute-force replay confirms the prefix alone would have succeeded
        assert apply_deltas(model, deltas[:1]) != model

    def test_concatenation_associativity(self):
        # applying xs ++ ys equals applying xs then ys, on real plan deltas
        from monolift import classify, synthesize_plan
        for seed in (3, 7, 11):
            model, boundary = generate(seed)
            plan = synthesize_plan(classify(model, boundary), boundary.policy, model, boundary)
            deltas = list(plan.all_deltas())
            for cut in (0, len(deltas) // 2, len(deltas)):
                joined = apply_deltas(model, deltas)
                staged = apply_deltas(apply_deltas(model, deltas[:cut]), deltas[cut:])
                assert joined == staged

    def test_purity_on_corpus(self):
        for seed in range(10):
            model, boundary = generate(seed)
            snapshot = model
            from monolift import classify, synthesize_plan
            plan = synthesize_plan(classify(model, boundary), boundary.policy, model, boundary)
            apply_deltas(model, plan.all_deltas())
            assert model == snapshot


class TestCanonicalization:
    def test_collections_sort_on_construction(self):
        a = ArchModel(classes=(CodeClass(id="b", name="B"), CodeClass(id="a", name="A")))
        b = ArchModel(classes=(CodeClass(id="a", name="A"), CodeClass(id="b", name="B")))
        assert a == b
        assert [c.id for c in a.classes] == ["a", "b"]

    def test_validated_delta_keeps_model_valid(self):
        # whenever apply_delta succeeds on a valid model, the result is valid
        model, boundary = generate(5)
        from monolift import classify, synthesize_plan
        plan = synthesize_plan(classify(model, boundary), boundary.policy, model, boundary)
        current = model
        for delta in plan.all_deltas():
            current = apply_delta(current, delta)
            assert validate_model(current) == []
