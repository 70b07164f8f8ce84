package shop;

public abstract class Base {
}
