"""The seven refactorings: mechanics, generated artifacts, self-resolution."""

from __future__ import annotations

import pytest

from monolift import (
    break_type_dep,
    capability_reachable,
    classify,
    create_dto,
    isolate_shared_code,
    move_fk,
    replace_call,
    replicate_data,
    split_database,
    synthesize_plan,
)
from monolift.boundary import Boundary, PolicyConfig
from monolift.deltas import apply_deltas
from monolift.errors import (
    ConsumerWritesReplicaError,
    NotCrossBoundaryError,
    ScenarioMismatchError,
)
from monolift.model import (
    ArchModel,
    CallEdge,
    CodeClass,
    Column,
    DataAccessEdge,
    EdgeSet,
    ForeignKey,
    MethodDecl,
    Table,
    TypeUseEdge,
)

from modelgen import generate


class TestReplaceCall:
    def test_sync_endpoint_path(self, f1):
        model, boundary = f1
        result = replace_call(model, boundary, "call:processOrder->updateInventory", "sync")
        after = apply_deltas(model, result.deltas)
        endpoint = after.generated_by_id("gen:api_endpoint:InventoryService.updateInventory")
        assert endpoint.payload_map()["path"] == "/api/inventory/update"
        assert endpoint.owner_service == "InventoryManagement"
        assert after.edges.calls == ()
        (edge,) = after.edges.service_calls
        assert edge.mode == "sync"
        assert capability_reachable(after, "OrderProcessor", "InventoryService")

    def test_sync_creates_interface_and_client_on_caller_side(self, f1):
        model, boundary = f1
        after = apply_deltas(model, replace_call(
            model, boundary, "call:processOrder->updateInventory", "sync").deltas)
        interface = after.generated_by_id("gen:interface:InventoryService@OrderManagement")
        client = after.generated_by_id("gen:request_client:InventoryService@OrderManagement")
        assert interface.name == "InventoryService"
        assert client.name == "RemoteInventoryService"
        assert {interface.owner_service, client.owner_service} == {"OrderManagement"}

    def test_async_channel_roles(self, f1):
        model, boundary = f1
        after = apply_deltas(model, replace_call(
            model, boundary, "call:processOrder->updateInventory", "async").deltas)
        channel = after.generated_by_id("gen:channel:OrderProcessor-events")
        assert channel.kind == "message_channel"
        publish = [e for e in after.edges.service_calls if e.mode == "async_publish"]
        subscribe = [e for e in after.edges.service_calls if e.mode == "async_subscribe"]
        assert [e.caller_entity_id for e in publish] == ["OrderProcessor"]
        assert [e.caller_entity_id for e in subscribe] == ["InventoryService"]
        assert capability_reachable(after, "OrderProcessor", "InventoryService")

    def test_intra_service_edge_is_rejected(self, f1):
        model, _ = f1
        mono = Boundary(services=(("Mono", ("OrderProcessor", "InventoryService", "InventoryManager")),))
        with pytest.raises(NotCrossBoundaryError):
            replace_call(model, mono, "call:processOrder->updateInventory", "sync")

    def test_subsumed_invocation_uses_are_cleared(self):
        model = ArchModel(
            classes=(CodeClass(id="A", name="A"), CodeClass(id="B", name="B")),
            methods=(MethodDecl(id="A.f", owner_class_id="A", name="f"),
                     MethodDecl(id="B.g", owner_class_id="B", name="g")),
            edges=EdgeSet(
                calls=(CallEdge(id="c", caller_method_id="A.f", callee_method_id="B.g"),),
                type_uses=(TypeUseEdge(id="tu", user_class_id="A", used_class_id="B", kind="invocation"),),
            ),
        )
        boundary = Boundary(services=(("SA", ("A",)), ("SB", ("B",))))
        after = apply_deltas(model, replace_call(model, boundary, "c", "sync").deltas)
        assert after.edges.type_uses == ()


class TestMoveFk:
    def test_f2_attribute_and_fk_removal(self, f2):
        model, boundary = f2
        result = move_fk(model, boundary, "fk:orders.customer_id")
        after = apply_deltas(model, result.deltas)
        assert after.foreign_keys == ()
        assert "customerId" in after.class_by_id("Order").scalar_attributes
        assert after.table_by_id("orders").owner_hint == "OrderManagement"
        assert after.table_by_id("customers").owner_hint == "CustomerManagement"
        assert after.generated_by_id("gen:data_access_interface:orders").name == "OrderRepository"
        assert after.generated_by_id("gen:data_access_interface:customers").name == "CustomerRepository"
        (request,) = result.requests
        assert request.refactoring == "ReplaceMethodCallWithServiceCall"

    def test_internal_fk_is_rejected(self, f2):
        model, _ = f2
        mono = Boundary(services=(("Mono", ("Order", "Customer", "orders", "customers")),))
        with pytest.raises(NotCrossBoundaryError):
            move_fk(model, mono, "fk:orders.customer_id")

    def test_composite_fk_yields_attribute_per_key_column(self):
        model = ArchModel(
            classes=(CodeClass(id="Order", name="Order"), CodeClass(id="Customer", name="Customer")),
            tables=(
                Table(id="orders", name="orders", columns=(
                    Column("id", "long"), Column("customer_region", "long"), Column("customer_num", "long"))),
                Table(id="customers", name="customers", columns=(
                    Column("region_id", "long"), Column("number", "long"))),
            ),
            foreign_keys=(ForeignKey(id="fk", from_table_id="orders",
                                     from_columns=("customer_region", "customer_num"),
                                     to_table_id="customers", to_columns=("region_id", "number")),),
            orm_links=(("Order", "orders"), ("Customer", "customers")),
        )
        boundary = Boundary(services=(("SA", ("Order", "orders")), ("SB", ("Customer", "customers"))))
        after = apply_deltas(model, move_fk(model, boundary, "fk").deltas)
        attrs = after.class_by_id("Order").scalar_attributes
        assert "customerRegionId" in attrs
        assert "customerNumber" in attrs
        assert after.foreign_keys == ()

    def test_missing_orm_link_skips_attribute_with_note(self):
        model = ArchModel(
            tables=(
                Table(id="a", name="a", columns=(Column("id", "long"), Column("b_id", "long"))),
                Table(id="b", name="b", columns=(Column("id", "long"),)),
            ),
            foreign_keys=(ForeignKey(id="fk", from_table_id="a", from_columns=("b_id",),
                                     to_table_id="b", to_columns=("id",)),),
        )
        boundary = Boundary(services=(("SA", ("a",)), ("SB", ("b",))))
        result = move_fk(model, boundary, "fk")
        after = apply_deltas(model, result.deltas)
        assert after.foreign_keys == ()
        assert any("no mapped class" in note for note in result.notes)

    def test_join_access_becomes_column_filter(self, f2):
        model, boundary = f2
        joined = model.replace(edges=model.edges.replace(data_access=(
            DataAccessEdge(id="da:join", accessor_class_id="Order",
                           table_id="customers", columns=("name",), mode="read"),)))
        after = apply_deltas(joined, move_fk(joined, boundary, "fk:orders.customer_id").deltas)
        (edge,) = after.edges.data_access
        assert edge.table_id == "orders"
        assert edge.columns == ("customer_id",)
        assert edge.mode == "read"


class TestReplicateData:
    def _fixture(self):
        model = ArchModel(
            classes=(CodeClass(id="InventoryItem", name="InventoryItem"),
                     CodeClass(id="OrderService", name="OrderService")),
            tables=(Table(id="inventory", name="inventory", columns=(
                Column("product_id", "long"), Column("stock_level", "int"))),),
            edges=EdgeSet(data_access=(
                DataAccessEdge(id="da:reader", accessor_class_id="OrderService",
                               table_id="inventory", columns=("stock_level",), mode="read"),)),
            orm_links=(("InventoryItem", "inventory"),),
        )
        boundary = Boundary(services=(("InventoryManagement", ("InventoryItem", "inventory")),
                                      ("OrderManagement", ("OrderService",))))
        return model, boundary

    def test_snapshot_channel_and_retargeted_read(self):
        model, boundary = self._fixture()
        result = replicate_data(model, boundary, "inventory", "InventoryManagement",
                                ["OrderManagement"], "event_sourcing")
        after = apply_deltas(model, result.deltas)
        snapshot = after.generated_by_id("gen:snapshot_table:inventory@OrderManagement")
        assert snapshot.kind == "snapshot_table"
        assert snapshot.payload_map()["read_only"] is True
        channel = after.generated_by_id("gen:channel:inventory-events")
        assert channel.payload_map()["topic"] == "inventory-updates"
        modes = sorted(e.mode for e in after.edges.service_calls)
        assert modes == ["async_publish", "async_subscribe"]
        (edge,) = after.edges.data_access
        assert edge.table_id == snapshot.id

    def test_no_consumers_means_channel_and_publish_only(self):
        model, boundary = self._fixture()
        result = replicate_data(model, boundary, "inventory", "InventoryManagement", [], "event_sourcing")
        after = apply_deltas(model, result.deltas)
        assert [g.kind for g in after.generated] == ["message_channel"]
        assert [e.mode for e in after.edges.service_calls] == ["async_publish"]

    def test_consumer_writes_are_rejected(self):
        model, boundary = self._fixture()
        writing = model.replace(edges=model.edges.replace(data_access=model.edges.data_access + (
            DataAccessEdge(id="da:bad", accessor_class_id="OrderService",
                           table_id="inventory", columns=("stock_level",), mode="write"),)))
        with pytest.raises(ConsumerWritesReplicaError):
            replicate_data(writing, boundary, "inventory", "InventoryManagement",
                           ["OrderManagement"], "event_sourcing")

    def test_cdc_mechanism_records_tag_without_channel(self):
        model, boundary = self._fixture()
        result = replicate_data(model, boundary, "inventory", "InventoryManagement",
                                ["OrderManagement"], "change_data_capture")
        after = apply_deltas(model, result.deltas)
        snapshot = after.generated_by_id("gen:snapshot_table:inventory@OrderManagement")
        assert snapshot.payload_map()["mechanism"] == "change_data_capture"
        assert not any(g.kind == "message_channel" for g in after.generated)


class TestSplitDatabase:
    def test_f3_ownership_requests_pending_call(self, f3):
        model, boundary = f3
        result = split_database(model, boundary, "products", "shared_write_columns", boundary.policy)
        assert [d.op for d in result.deltas] == ["set_table_owner_hint"]
        assert result.deltas[0].args["service"] == "InventoryManagement"
        (request,) = result.requests
        assert request.refactoring == "ReplaceMethodCallWithServiceCall"
        assert request.subject.ids[0] == "da:order-discount"

    def test_exclusive_table_produces_no_deltas(self, f2):
        model, boundary = f2
        result = split_database(model, boundary, "orders", "exclusive", boundary.policy)
        assert result.deltas == ()

    def test_scenario_mismatch_is_rejected(self, f3):
        model, boundary = f3
        with pytest.raises(ScenarioMismatchError):
            split_database(model, boundary, "products", "distinct_columns", boundary.policy)

    def test_distinct_columns_split_partitions_columns(self):
        model = ArchModel(
            classes=(CodeClass(id="A", name="A"), CodeClass(id="B", name="B")),
            tables=(Table(id="t", name="shared", columns=(
                Column("id", "long"), Column("a_col", "int"), Column("b_col", "int"))),),
            edges=EdgeSet(data_access=(
                DataAccessEdge(id="wa", accessor_class_id="A", table_id="t", columns=("a_col",), mode="write"),
                DataAccessEdge(id="wb", accessor_class_id="B", table_id="t", columns=("b_col",), mode="write"),
            )),
        )
        boundary = Boundary(services=(("SA", ("A", "t")), ("SB", ("B",))))
        findings = classify(model, boundary)
        plan = synthesize_plan(findings, boundary.policy, model, boundary)
        after = apply_deltas(model, plan.all_deltas())
        assert after.table_by_id("t") is None
        part_a = after.table_by_id("gen:table:t@SA")
        part_b = after.table_by_id("gen:table:t@SB")
        assert part_a.column_names() == ("id", "a_col")
        assert part_b.column_names() == ("id", "b_col")
        assert part_a.owner_hint == "SA"
        assert part_b.owner_hint == "SB"
        # access edges follow their service's part
        from monolift import access_matrix
        assert access_matrix(after, boundary, part_a.id).writers() == ("SA",)
        assert access_matrix(after, boundary, part_b.id).writers() == ("SB",)

    def test_split_requests_fk_moves_first(self):
        model = ArchModel(
            classes=(CodeClass(id="A", name="A"), CodeClass(id="B", name="B")),
            tables=(
                Table(id="t", name="shared", columns=(Column("id", "long"), Column("a_col", "int"),
                                                      Column("b_col", "int"))),
                Table(id="other", name="other", columns=(Column("id", "long"), Column("t_id", "long"))),
            ),
            foreign_keys=(ForeignKey(id="fk", from_table_id="other", from_columns=("t_id",),
                                     to_table_id="t", to_columns=("id",)),),
            edges=EdgeSet(data_access=(
                DataAccessEdge(id="wa", accessor_class_id="A", table_id="t", columns=("a_col",), mode="write"),
                DataAccessEdge(id="wb", accessor_class_id="B", table_id="t", columns=("b_col",), mode="write"),
            )),
        )
        boundary = Boundary(services=(("SA", ("A", "t", "other")), ("SB", ("B",))))
        plan = synthesize_plan(classify(model, boundary), boundary.policy, model, boundary)
        order = [s.step_id for s in plan.steps]
        fk_move = next(i for i, s in enumerate(plan.steps) if s.refactoring == "MoveForeignKeyToCode")
        split = next(i for i, s in enumerate(plan.steps)
                     if s.refactoring == "SplitDatabase" and s.is_primary)
        assert fk_move < split, order
        after = apply_deltas(model, plan.all_deltas())
        assert after.foreign_keys == ()


class TestCreateDto:
    def test_f4_order_dto_fields(self, f4):
        model, boundary = f4
        result = create_dto(model, boundary, "OrderService.getOrderDetails")
        after = apply_deltas(model, result.deltas)
        dto = after.generated_by_id("gen:dto:Order")
        assert dto.name == "OrderDTO"
        assert dto.payload_map()["fields"] == ["orderId", "customerName", "products"]
        assert dto.owner_service == "OrderManagement"
        # the domain type itself is untouched
        assert after.class_by_id("Order") == model.class_by_id("Order")
        (edge,) = after.edges.type_uses
        assert edge.used_class_id == dto.id

    def test_type_without_attributes_yields_empty_dto_with_note(self):
        model = ArchModel(
            classes=(CodeClass(id="Marker", name="Marker"), CodeClass(id="User", name="User")),
            edges=EdgeSet(type_uses=(TypeUseEdge(id="tu", user_class_id="User",
                                                 used_class_id="Marker", kind="return"),)),
        )
        boundary = Boundary(services=(("SA", ("Marker",)), ("SB", ("User",))))
        result = create_dto(model, boundary, "Marker")
        after = apply_deltas(model, result.deltas)
        assert after.generated_by_id("gen:dto:Marker").payload_map()["fields"] == []
        assert any("no scalar attributes" in note for note in result.notes)

    def test_two_consumers_share_one_dto(self):
        model = ArchModel(
            classes=(CodeClass(id="Order", name="Order", scalar_attributes=("id",)),
                     CodeClass(id="U1", name="U1"), CodeClass(id="U2", name="U2")),
            edges=EdgeSet(type_uses=(
                TypeUseEdge(id="tu1", user_class_id="U1", used_class_id="Order", kind="return"),
                TypeUseEdge(id="tu2", user_class_id="U2", used_class_id="Order", kind="parameter"),
            )),
        )
        boundary = Boundary(services=(("SA", ("Order",)), ("SB", ("U1",)), ("SC", ("U2",))))
        plan = synthesize_plan(classify(model, boundary), boundary.policy, model, boundary)
        after = apply_deltas(model, plan.all_deltas())
        dtos = [g for g in after.generated if g.kind == "dto"]
        assert len(dtos) == 1
        assert {e.used_class_id for e in after.edges.type_uses} == {dtos[0].id}

    def test_non_crossing_subject_is_rejected(self, f4):
        model, _ = f4
        mono = Boundary(services=(("Mono", ("Order", "Product", "OrderService", "BillingService")),))
        with pytest.raises(NotCrossBoundaryError):
            create_dto(model, mono, "OrderService.getOrderDetails")


class TestBreakTypeDep:
    def _fixture(self, kinds=("return", "invocation")):
        edges = tuple(
            TypeUseEdge(id=f"tu{i}", user_class_id="OrderService", used_class_id="Product", kind=kind)
            for i, kind in enumerate(kinds)
        )
        model = ArchModel(
            classes=(CodeClass(id="Product", name="Product", scalar_attributes=("id", "name", "price")),
                     CodeClass(id="OrderService", name="OrderService")),
            edges=EdgeSet(type_uses=edges),
        )
        boundary = Boundary(services=(("InventoryManagement", ("Product",)),
                                      ("OrderManagement", ("OrderService",))))
        return model, boundary

    def test_central_strategy_builds_interface_dto_and_call(self):
        model, boundary = self._fixture()
        plan = synthesize_plan(classify(model, boundary), boundary.policy, model, boundary)
        after = apply_deltas(model, plan.all_deltas())
        interface = after.generated_by_id("gen:interface:Product@OrderManagement")
        assert interface.name == "ProductInterface"
        assert after.generated_by_id("gen:dto:Product").name == "ProductDTO"
        sync = [e for e in after.edges.service_calls if e.mode == "sync"]
        assert sync and sync[0].provider_entity_id == "Product"
        assert capability_reachable(after, "OrderService", "Product")

    def test_proxy_strategy_adds_proxy_without_dto(self):
        model, boundary = self._fixture(kinds=("invocation",))
        result = break_type_dep(model, boundary, ("Product", "OrderManagement"), "proxy")
        after = apply_deltas(model, result.deltas)
        proxy = after.generated_by_id("gen:proxy_service:Product@OrderManagement")
        assert proxy.kind == "proxy_service"
        assert proxy.owner_service == "OrderManagement"
        assert not any(g.kind == "dto" for g in after.generated)
        (edge,) = after.edges.type_uses
        assert edge.used_class_id == proxy.id

    def test_replicate_strategy_copies_type_and_requests_replication(self):
        model = ArchModel(
            classes=(CodeClass(id="Product", name="Product", scalar_attributes=("id",)),
                     CodeClass(id="OrderService", name="OrderService")),
            tables=(Table(id="products", name="products", columns=(Column("product_id", "long"),)),),
            edges=EdgeSet(type_uses=(TypeUseEdge(id="tu", user_class_id="OrderService",
                                                 used_class_id="Product", kind="attribute"),)),
            orm_links=(("Product", "products"),),
        )
        boundary = Boundary(services=(("InventoryManagement", ("Product", "products")),
                                      ("OrderManagement", ("OrderService",))))
        plan = synthesize_plan(classify(model, boundary), boundary.policy, model, boundary)
        after = apply_deltas(model, plan.all_deltas())
        replica = after.generated_by_id("gen:type_replica:Product@OrderManagement")
        assert replica is not None
        assert after.generated_by_id("gen:snapshot_table:products@OrderManagement") is not None
        (edge,) = after.edges.type_uses
        assert edge.used_class_id == replica.id

    def test_group_inside_one_service_is_rejected(self):
        model, _ = self._fixture()
        mono = Boundary(services=(("Mono", ("Product", "OrderService")),))
        with pytest.raises(NotCrossBoundaryError):
            break_type_dep(model, mono, ("Product", "Mono"), "central")


class TestIsolateSharedCode:
    def test_duplicate_copies_per_service_and_removes_original(self, f5):
        model, boundary = f5
        result = isolate_shared_code(model, boundary, "Utils", "duplicate")
        after = apply_deltas(model, result.deltas)
        copies = [g for g in after.generated if g.kind == "artifact_copy"]
        assert {c.owner_service for c in copies} == {"OrderManagement", "InventoryManagement"}
        assert after.artifact_by_id("Utils") is None
        retagged = [e for e in after.edges.artifact_uses if e.artifact_id.startswith("gen:artifact_copy:Utils")]
        assert len(retagged) == 2

    def test_library_is_versioned(self, f5):
        model, boundary = f5
        after = apply_deltas(model, isolate_shared_code(model, boundary, "ValidationLib", "library").deltas)
        library = after.generated_by_id("gen:library:ValidationLib")
        assert library.payload_map()["version"] == "1.0.0"
        users = [e for e in after.edges.artifact_uses if e.artifact_id == library.id]
        assert len(users) == 2

    def test_business_logic_becomes_service_with_endpoint(self, f5):
        model, boundary = f5
        plan = synthesize_plan(classify(model, boundary), boundary.policy, model, boundary)
        after = apply_deltas(model, plan.all_deltas())
        service = after.generated_by_id("gen:new_service:CalculateDiscount")
        endpoint = after.generated_by_id("gen:api_endpoint:CalculateDiscount")
        assert service.kind == "new_service"
        assert endpoint.payload_map()["path"] == "/calculate-discount"
        assert endpoint.owner_service == service.owner_service == "CalculateDiscountService"
        assert capability_reachable(after, "OrderHandler", service.id)
        assert capability_reachable(after, "BillingHandler", service.id)

    def test_scenario_mismatch_for_business_logic_duplicate(self, f5):
        model, boundary = f5
        with pytest.raises(ScenarioMismatchError):
            isolate_shared_code(model, boundary, "CalculateDiscount", "duplicate")

    def test_single_service_artifact_is_rejected(self, f5):
        model, _ = f5
        mono = Boundary(services=(("Mono", tuple(c.id for c in model.classes)
                                   + tuple(a.id for a in model.artifacts)),))
        with pytest.raises(NotCrossBoundaryError):
            isolate_shared_code(model, mono, "Utils", "duplicate")


class TestTransformInvariants:
    def test_each_step_resolves_its_own_finding(self):
        # after a full plan is applied, none of the original findings recur
        for seed in range(40):
            model, boundary = generate(seed)
            findings = classify(model, boundary)
            plan = synthesize_plan(findings, boundary.policy, model, boundary)
            after = apply_deltas(model, plan.all_deltas())
            leftover = {f.id for f in classify(after, boundary)}
            assert not leftover & {f.id for f in findings}

    def test_untouched_services_keep_their_entities(self, f3):
        model, boundary = f3
        plan = synthesize_plan(classify(model, boundary), boundary.policy, model, boundary)
        after = apply_deltas(model, plan.all_deltas())
        # classes were never part of the shared-table resolution's edits
        assert after.class_by_id("OrderService") == model.class_by_id("OrderService")
        assert after.class_by_id("InventoryService") == model.class_by_id("InventoryService")

    def test_identical_inputs_identical_deltas(self, f1):
        model, boundary = f1
        a = replace_call(model, boundary, "call:processOrder->updateInventory", "sync")
        b = replace_call(model, boundary, "call:processOrder->updateInventory", "sync")
        assert a.deltas == b.deltas

    def test_removed_capability_stays_reachable(self):
        # every removed call edge is replaced by a path through generated
        # entities from the caller class to the callee class
        for seed in range(25):
            model, boundary = generate(seed)
            crossing = []
            for edge in model.edges.calls:
                caller = model.method_by_id(edge.caller_method_id)
                callee = model.method_by_id(edge.callee_method_id)
                a = boundary.owner_of(model, caller.owner_class_id)
                b = boundary.owner_of(model, callee.owner_class_id)
                if a != b:
                    crossing.append((caller.owner_class_id, callee.owner_class_id))
            plan = synthesize_plan(classify(model, boundary), boundary.policy, model, boundary)
            after = apply_deltas(model, plan.all_deltas())
            for caller_cls, callee_cls in crossing:
                assert capability_reachable(after, caller_cls, callee_cls), (seed, caller_cls, callee_cls)
